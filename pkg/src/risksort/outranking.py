"""Deterministic outranking kernel: partial indices, credibility, assignment.

Conventions (shared with every consumer):
  * cost criteria are normalized to gain direction by negating both values
    before any threshold formula is applied;
  * the concordant branch wins exact boundary ties (a >= b - q gives 1 even
    when p == q makes the interpolation band empty, and a >= b - p gives
    discordance 0 even when v == p);
  * the lambda cut is closed: the relation holds when sigma >= lambda.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .model import (
    GAIN,
    Alternative,
    ConfigurationError,
    CriterionSpec,
    Project,
    check_weight_vector,
)

RULE_PESSIMISTIC = "pessimistic"
RULE_PESSIMISTIC_STRICT = "pessimistic-strict"
RULE_OPTIMISTIC = "optimistic"
RULES = (RULE_PESSIMISTIC, RULE_PESSIMISTIC_STRICT, RULE_OPTIMISTIC)

#: Default assignment rule: descending scan requiring sigma(a,b_k) >= lambda
#: and sigma(b_k,a) < lambda (strict preference of a over the profile).
DEFAULT_RULE = RULE_PESSIMISTIC_STRICT


def check_rule(rule: str) -> str:
    if rule not in RULES:
        raise ConfigurationError(f"unknown assignment rule {rule!r}; expected one of {RULES}")
    return rule


@dataclass(frozen=True)
class OutrankingScores:
    """Credibility of a-vs-profile and profile-vs-a, one entry per profile."""

    sigma_up: tuple[float, ...]
    sigma_down: tuple[float, ...]

    def __post_init__(self):
        if len(self.sigma_up) != len(self.sigma_down):
            raise ValueError("sigma_up and sigma_down must have equal length")

    @property
    def n_profiles(self) -> int:
        return len(self.sigma_up)


def partial_concordance(a_val: float, b_val: float, q: float, p: float,
                        direction: str = GAIN) -> float:
    """Per-criterion support for "a is at least as good as b", in [0, 1].

    Piecewise linear: 0 below b - p, 1 from b - q upward, interpolated in
    between. With p == q the band is empty and this is a pure step.
    """
    if direction != GAIN:
        a_val, b_val = -a_val, -b_val
    if a_val >= b_val - q:
        return 1.0
    if a_val <= b_val - p:
        return 0.0
    return (a_val - b_val + p) / (p - q)


def partial_discordance(a_val: float, b_val: float, p: float, v: Optional[float],
                        direction: str = GAIN) -> float:
    """Per-criterion opposition to "a is at least as good as b", in [0, 1].

    Zero whenever the criterion carries no veto threshold.
    """
    if v is None:
        return 0.0
    if direction != GAIN:
        a_val, b_val = -a_val, -b_val
    if a_val >= b_val - p:
        return 0.0
    if a_val <= b_val - v:
        return 1.0
    return (b_val - a_val - p) / (v - p)


def concordance(a_row: Sequence[float], b_row: Sequence[float],
                weights: Mapping[str, float], criteria: Sequence[CriterionSpec]) -> float:
    """Weighted sum of partial concordances of a_row against b_row."""
    w = check_weight_vector(weights, [c.id for c in criteria])
    parts = [
        partial_concordance(a, b, c.q, c.p, c.direction)
        for a, b, c in zip(a_row, b_row, criteria)
    ]
    return float(np.dot(w, parts))


def credibility(conc: float, partial_discordances: Sequence[float]) -> float:
    """Concordance attenuated by the discordances that exceed it.

    Equals conc when no discordance exceeds it; collapses to 0 on a full
    veto (d == 1) whenever conc < 1. A discordance can only exceed conc when
    conc < 1, so the (1 - conc) denominator is never evaluated at conc == 1.
    """
    sigma = conc
    for d in partial_discordances:
        if d > conc:
            sigma *= (1.0 - d) / (1.0 - conc)
    return sigma


def _criterion_arrays(criteria: Sequence[CriterionSpec]):
    sign = np.array([1.0 if c.direction == GAIN else -1.0 for c in criteria])
    q = np.array([c.q for c in criteria])
    p = np.array([c.p for c in criteria])
    v = np.array([np.nan if c.v is None else c.v for c in criteria])
    return sign, q, p, v


def _partial_concordance_array(a: np.ndarray, b: np.ndarray, q: np.ndarray,
                               p: np.ndarray) -> np.ndarray:
    # a, b already direction-normalized; q/p broadcast over the last axis
    full = a >= b - q
    none = a <= b - p
    band = np.broadcast_to(p - q, full.shape)
    num = a - b + p
    interp = np.divide(num, band, out=np.zeros_like(num), where=band > 0)
    return np.where(full, 1.0, np.where(none, 0.0, interp))


def _partial_discordance_array(a: np.ndarray, b: np.ndarray, p: np.ndarray,
                               v: np.ndarray) -> np.ndarray:
    has_veto = ~np.isnan(v)
    v_safe = np.where(has_veto, v, np.inf)
    none = a >= b - p
    full = a <= b - v_safe
    band = np.broadcast_to(v_safe - p, none.shape)
    num = b - a - p
    interp = np.divide(num, band, out=np.zeros_like(num),
                       where=np.isfinite(band) & (band > 0))
    d = np.where(none, 0.0, np.where(full, 1.0, interp))
    return np.where(has_veto, d, 0.0)


def _credibility_array(conc: np.ndarray, d: np.ndarray) -> np.ndarray:
    # conc: (..., ), d: (..., n); factors only applied where d exceeds conc
    cexp = conc[..., None]
    mask = d > cexp
    den = 1.0 - cexp
    den = np.where(den > 0, den, 1.0)  # mask is empty wherever conc == 1
    factors = np.where(mask, (1.0 - d) / den, 1.0)
    return conc * factors.prod(axis=-1)


def score_tensor(values: np.ndarray, profiles: np.ndarray, criteria: Sequence[CriterionSpec],
                 weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized credibilities for a batch of alternatives.

    values: (m, n) evaluations; profiles: (m, n_profiles, n); weights: (n,).
    Returns (sigma_up, sigma_down), each of shape (m, n_profiles).
    """
    sign, q, p, v = _criterion_arrays(criteria)
    a = values[:, None, :] * sign
    b = profiles * sign
    c_up = _partial_concordance_array(a, b, q, p)
    c_down = _partial_concordance_array(b, a, q, p)
    conc_up = c_up @ weights
    conc_down = c_down @ weights
    d_up = _partial_discordance_array(a, b, p, v)
    d_down = _partial_discordance_array(b, a, p, v)
    return _credibility_array(conc_up, d_up), _credibility_array(conc_down, d_down)


def score_alternative(alternative: Alternative, project: Project,
                      weights: Mapping[str, float],
                      values: Optional[Sequence[float]] = None) -> OutrankingScores:
    """Outranking scores of one alternative against every limit profile.

    values overrides the alternative's (point) evaluations when given;
    interval evaluations contribute their midpoint otherwise.
    """
    w = check_weight_vector(weights, project.criterion_ids)
    if values is None:
        values = [alternative.evaluations[c.id].midpoint for c in project.criteria]
    vals = np.asarray(values, dtype=float)[None, :]
    profiles = project.scheme.matrix(project.criteria, alternative.sector)[None, :, :]
    up, down = score_tensor(vals, profiles, project.criteria, w)
    return OutrankingScores(tuple(up[0].tolist()), tuple(down[0].tolist()))


def project_scores(project: Project, weights: Mapping[str, float],
                   values: Optional[np.ndarray] = None) -> dict[str, OutrankingScores]:
    """Scores for every alternative; values is an optional (m, n) override."""
    w = check_weight_vector(weights, project.criterion_ids)
    if values is None:
        lo, hi = project.evaluation_bounds()
        values = 0.5 * (lo + hi)
    up, down = score_tensor(np.asarray(values, float), project.profile_tensor(),
                            project.criteria, w)
    return {
        alt.id: OutrankingScores(tuple(up[i].tolist()), tuple(down[i].tolist()))
        for i, alt in enumerate(project.alternatives)
    }


def _check_lambda(lam: float) -> None:
    if not 0.5 <= lam <= 1.0:
        raise ConfigurationError(f"lambda must lie in [0.5, 1], got {lam}")


def assign(scores: OutrankingScores, lam: float, rule: str = DEFAULT_RULE) -> int:
    """Category index in 1..p for one alternative at cutting level lam."""
    _check_lambda(lam)
    check_rule(rule)
    up, down = scores.sigma_up, scores.sigma_down
    n = scores.n_profiles
    if rule == RULE_PESSIMISTIC:
        for k in range(n - 1, -1, -1):
            if up[k] >= lam:
                return k + 2
        return 1
    if rule == RULE_PESSIMISTIC_STRICT:
        for k in range(n - 1, -1, -1):
            if up[k] >= lam and down[k] < lam:
                return k + 2
        return 1
    for k in range(n):
        if down[k] >= lam and up[k] < lam:
            return k + 1
    return n + 1


@dataclass(frozen=True)
class LambdaInterval:
    """One maximal lambda interval with a constant assignment.

    Covers (lo, hi]; the first interval of a table additionally includes its
    own lo endpoint (the closed >= cut makes assignments left-constant).
    """

    lo: float
    hi: float
    category: int


def lambda_breakpoints(scores: OutrankingScores, rule: str = DEFAULT_RULE) -> list[LambdaInterval]:
    """Partition [0.5, 1] into maximal intervals of constant assignment.

    Candidate breakpoints are exactly the sigma values falling in [0.5, 1);
    adjacent intervals with equal categories merge. A sigma at exactly 0.5
    yields a degenerate leading interval covering just that point.
    """
    check_rule(rule)
    cuts = sorted(
        {s for s in (*scores.sigma_up, *scores.sigma_down) if 0.5 <= s < 1.0}
    )
    edges = [0.5, *cuts, 1.0]
    intervals: list[LambdaInterval] = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        # every comparison is constant on (lo, hi]; probe at the right edge
        cat = assign(scores, hi, rule)
        if intervals and intervals[-1].category == cat:
            intervals[-1] = LambdaInterval(intervals[-1].lo, hi, cat)
        else:
            intervals.append(LambdaInterval(lo, hi, cat))
    return intervals


@dataclass(frozen=True)
class BreakpointTable:
    """Lambda-interval diagnostic for one alternative under one rule."""

    rule: str
    intervals: tuple[LambdaInterval, ...]
    non_monotone: bool
    skips_categories: bool

    @property
    def fragile(self) -> bool:
        """Assignment changes abruptly or against the rule's natural direction."""
        return self.non_monotone or self.skips_categories

    @property
    def categories(self) -> tuple[int, ...]:
        return tuple(iv.category for iv in self.intervals)


def breakpoint_diagnostics(scores: OutrankingScores, rule: str = DEFAULT_RULE) -> BreakpointTable:
    """Breakpoint table plus fragility flags.

    Pessimistic variants are expected to be nonincreasing in lambda and the
    optimistic one nondecreasing; any violation, or any jump skipping a
    category, marks the alternative as fragile.
    """
    intervals = lambda_breakpoints(scores, rule)
    cats = [iv.category for iv in intervals]
    steps = list(zip(cats[:-1], cats[1:]))
    if rule == RULE_OPTIMISTIC:
        non_monotone = any(b < a for a, b in steps)
    else:
        non_monotone = any(b > a for a, b in steps)
    skips = any(abs(b - a) > 1 for a, b in steps)
    return BreakpointTable(rule, tuple(intervals), non_monotone, skips)
