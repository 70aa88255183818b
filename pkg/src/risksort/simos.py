"""Revised Simos cards procedure: ranked criterion cards to normalized weights.

A deck ranks criteria from least to most important, optionally separated by
white cards; the ratio z says how many times the most important criterion
outweighs the least important one. Weights are kept at full precision; the
two-decimal figures traditionally shown in elicitation tables are produced
by truncation, available through display_value().
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .model import ConfigurationError


@dataclass(frozen=True)
class CardDeck:
    """Ranked criterion cards, least important rank first.

    white_cards[r] counts the blank separators between rank r+1 and r+2,
    so it has one entry less than ranks. z must exceed 1.
    """

    ranks: tuple[tuple[str, ...], ...]
    white_cards: tuple[int, ...]
    z: float

    def __post_init__(self):
        if not self.ranks or any(not r for r in self.ranks):
            raise ValueError("deck needs at least one non-empty rank")
        if len(self.white_cards) != len(self.ranks) - 1:
            raise ValueError(
                f"expected {len(self.ranks) - 1} white-card counts, got {len(self.white_cards)}"
            )
        if any(w < 0 or int(w) != w for w in self.white_cards):
            raise ValueError(f"white-card counts must be nonnegative integers: {self.white_cards}")
        seen: set[str] = set()
        for rank in self.ranks:
            for cid in rank:
                if cid in seen:
                    raise ValueError(f"criterion {cid!r} appears in more than one rank")
                seen.add(cid)
        if not self.z > 1:
            raise ConfigurationError(f"importance ratio z must exceed 1, got {self.z}")

    @property
    def criterion_ids(self) -> tuple[str, ...]:
        return tuple(cid for rank in self.ranks for cid in rank)

    def rank_of(self, criterion_id: str) -> int:
        for r, rank in enumerate(self.ranks):
            if criterion_id in rank:
                return r
        raise KeyError(criterion_id)


@dataclass(frozen=True)
class SimosResult:
    rank_weights: tuple[float, ...]  # non-normalized k(r), one per rank
    total: float                     # sum of non-normalized weights over criteria
    weights: dict[str, float]        # normalized, summing to 1
    _rank_sizes: tuple[int, ...] = field(default=(), repr=False)

    def rank_totals(self) -> tuple[float, ...]:
        return tuple(k * n for k, n in zip(self.rank_weights, self._rank_sizes))


def simos_resolve(deck: CardDeck) -> SimosResult:
    """Resolve a deck into non-normalized rank weights and normalized weights.

    Each gap between consecutive ranks is worth (white cards + 1) units; the
    unit is sized so the last rank lands exactly on z. Criteria sharing a
    rank receive identical weights. A single-rank deck degenerates to equal
    weights.
    """
    n_ranks = len(deck.ranks)
    if n_ranks == 1:
        k = (1.0,)
    else:
        gaps = [w + 1 for w in deck.white_cards]
        e = sum(gaps)
        cum = 0
        k_list = []
        for r in range(n_ranks):
            # k(r) = 1 + (z - 1) * cum/e; the ratio form makes k(last) == z exact
            k_list.append(1.0 + (deck.z - 1.0) * (cum / e))
            if r < n_ranks - 1:
                cum += gaps[r]
        k = tuple(k_list)
    sizes = tuple(len(rank) for rank in deck.ranks)
    total = math.fsum(kr * n for kr, n in zip(k, sizes))
    weights = {
        cid: k[r] / total for r, rank in enumerate(deck.ranks) for cid in rank
    }
    return SimosResult(rank_weights=k, total=total, weights=weights, _rank_sizes=sizes)


def display_value(x: float, decimals: int = 2) -> float:
    """Truncate toward zero at the given number of decimals.

    Elicitation tables conventionally truncate rather than round; full
    precision is always kept internally.
    """
    scale = 10 ** decimals
    return math.trunc(x * scale) / scale


@dataclass(frozen=True)
class Preorder:
    """Total preorder over criteria induced by a deck's rank order."""

    ranks: tuple[tuple[str, ...], ...]

    def relation(self, a: str, b: str) -> str:
        """'~' when equally important, '<' when a is less important, else '>'."""
        ra = self._rank_of(a)
        rb = self._rank_of(b)
        if ra == rb:
            return "~"
        return "<" if ra < rb else ">"

    def _rank_of(self, cid: str) -> int:
        for r, rank in enumerate(self.ranks):
            if cid in rank:
                return r
        raise KeyError(cid)

    def chain(self) -> str:
        """Render as 'a ~ b < c < ...', least important first."""
        parts: list[str] = []
        for r, rank in enumerate(self.ranks):
            if r:
                parts.append("<")
            group = " ~ ".join(rank)
            parts.append(group)
        return " ".join(parts)


def preorder_check(deck: CardDeck) -> Preorder:
    """Induced total preorder; consistent with simos_resolve by construction:
    a < b implies weight(a) < weight(b) whenever z > 1, and a ~ b implies
    equal weights.
    """
    return Preorder(deck.ranks)


def equal_weights(criterion_ids: Sequence[str]) -> dict[str, float]:
    n = len(criterion_ids)
    return {cid: 1.0 / n for cid in criterion_ids}
