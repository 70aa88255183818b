"""Monte Carlo acceptability engine over the outranking kernel.

Samples weights, the cutting level and (optionally) interval evaluations,
assigns every alternative per draw, and accumulates per-category counts into
acceptability indices. Every draw owns a counter-based random stream derived
from (seed, draw index), so partitioning draws across workers can never
change the result: reports are bit-identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .model import (
    ConfigurationError,
    CriterionSpec,
    LambdaSpec,
    Project,
    UnsupportedInputError,
    check_weight_vector,
)
from .outranking import (
    DEFAULT_RULE,
    OutrankingScores,
    assign,
    check_rule,
    lambda_breakpoints,
    score_tensor,
)

_MASK64 = (1 << 64) - 1


def draw_rng(seed: int, index: int) -> np.random.Generator:
    """Independent random stream for one draw, keyed by (seed, draw index)."""
    key = ((int(seed) & _MASK64) << 64) | (int(index) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_simplex(n: int, rng: np.random.Generator, size: int = 1) -> np.ndarray:
    """Uniform points on the unit simplex via normalized exponentials."""
    g = rng.exponential(size=(size, n))
    return g / g.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class WeightSampler:
    """Weight source for the simulation: fixed vector, uniform simplex, or
    uniform on the simplex intersected with per-criterion interval bounds."""

    mode: str  # "fixed" | "simplex" | "interval"
    fixed_weights: Optional[Mapping[str, float]] = None
    bounds: Optional[Mapping[str, tuple[float, float]]] = None
    rejection_budget: int = 10_000

    @classmethod
    def fixed(cls, weights: Mapping[str, float]) -> "WeightSampler":
        return cls(mode="fixed", fixed_weights=dict(weights))

    @classmethod
    def simplex_uniform(cls) -> "WeightSampler":
        return cls(mode="simplex")

    @classmethod
    def intervals(cls, bounds: Mapping[str, tuple[float, float]],
                  rejection_budget: int = 10_000) -> "WeightSampler":
        return cls(mode="interval",
                   bounds={k: (float(lo), float(hi)) for k, (lo, hi) in bounds.items()},
                   rejection_budget=rejection_budget)

    def prepare(self, criterion_ids: Sequence[str]) -> "_PreparedSampler":
        """Validate against the project's criteria and bind the column order."""
        if self.mode == "fixed":
            if self.fixed_weights is None:
                raise ConfigurationError("fixed sampler needs a weight vector")
            w = check_weight_vector(self.fixed_weights, criterion_ids, owner="fixed weights")
            return _PreparedSampler("fixed", fixed=w)
        if self.mode == "simplex":
            return _PreparedSampler("simplex", n=len(criterion_ids))
        if self.mode != "interval":
            raise ConfigurationError(f"unknown sampler mode {self.mode!r}")
        if self.bounds is None:
            raise ConfigurationError("interval sampler needs per-criterion bounds")
        missing = set(criterion_ids) - set(self.bounds)
        if missing:
            raise ConfigurationError(f"interval bounds missing for {sorted(missing)}")
        lo = np.array([self.bounds[c][0] for c in criterion_ids])
        hi = np.array([self.bounds[c][1] for c in criterion_ids])
        bad = [
            (c, self.bounds[c]) for c in criterion_ids
            if not (0.0 <= self.bounds[c][0] <= self.bounds[c][1] <= 1.0)
        ]
        if bad:
            raise ConfigurationError(f"interval bounds outside 0 <= lo <= hi <= 1: {bad}")
        if lo.sum() > 1.0 + 1e-12 or hi.sum() < 1.0 - 1e-12:
            raise ConfigurationError(
                "interval bounds leave no feasible weights: "
                f"sum(lo)={lo.sum():.6g}, sum(hi)={hi.sum():.6g} (need sum(lo) <= 1 <= sum(hi))"
            )
        return _PreparedSampler("interval", lo=lo, hi=hi, budget=self.rejection_budget)


@dataclass
class _PreparedSampler:
    mode: str
    fixed: Optional[np.ndarray] = None
    n: int = 0
    lo: Optional[np.ndarray] = None
    hi: Optional[np.ndarray] = None
    budget: int = 10_000

    @property
    def consumes_randomness(self) -> bool:
        return self.mode != "fixed"

    def draw(self, rng: np.random.Generator) -> np.ndarray:
        if self.mode == "fixed":
            return self.fixed
        if self.mode == "simplex":
            return sample_simplex(self.n, rng)[0]
        return self._draw_interval(rng)

    def _draw_interval(self, rng: np.random.Generator) -> np.ndarray:
        # Uniform on {w: sum w = 1, lo <= w <= hi}. Shift by lo, then sample
        # the residual mass uniformly on a simplex and reject on the caps:
        # an affine shift of a uniform sample stays uniform on the target.
        lo, hi = self.lo, self.hi
        slack = 1.0 - lo.sum()
        caps = hi - lo
        if slack <= 1e-12:
            w = lo / lo.sum()
            assert _within_bounds(w, lo, hi)
            return w
        if caps.sum() - slack <= 1e-12:
            w = hi / hi.sum()
            assert _within_bounds(w, lo, hi)
            return w
        n = len(lo)
        batch = 64
        attempts = 0
        while attempts < self.budget:
            batch = min(batch, self.budget - attempts)
            x = sample_simplex(n, rng, size=batch) * slack
            ok = np.nonzero((x <= caps).all(axis=1))[0]
            if ok.size:
                w = lo + x[ok[0]]
                assert _within_bounds(w, lo, hi)
                return w
            attempts += batch
            batch *= 2
        raise ConfigurationError(
            f"rejection budget of {self.budget} attempts exhausted while sampling "
            f"weights within lo={lo.tolist()}, hi={hi.tolist()}"
        )


def _within_bounds(w: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> bool:
    eps = 1e-12
    return bool(
        (w >= lo - eps).all() and (w <= hi + eps).all() and abs(w.sum() - 1.0) <= 1e-9
    )


def sample_weights(sampler: WeightSampler, criterion_ids: Sequence[str],
                   rng: np.random.Generator) -> dict[str, float]:
    """One weight vector from the sampler, keyed by criterion id."""
    prepared = sampler.prepare(criterion_ids)
    w = prepared.draw(rng)
    return {cid: float(w[j]) for j, cid in enumerate(criterion_ids)}


def sample_evaluation(evaluation, criterion: CriterionSpec, rng: np.random.Generator) -> float:
    """Point evaluations pass through; ordinal intervals draw an integer
    uniformly over lo..hi inclusive, ratio intervals a uniform real."""
    if evaluation.is_point:
        return float(evaluation.lo)
    if criterion.is_ordinal:
        return float(rng.integers(int(evaluation.lo), int(evaluation.hi) + 1))
    return float(rng.uniform(evaluation.lo, evaluation.hi))


@dataclass(frozen=True)
class RunConfig:
    """Simulation parameters; identical configs with equal seeds reproduce
    bit-identical reports regardless of worker count."""

    draws: int = 10_000
    seed: int = 0
    lam: LambdaSpec = field(default_factory=lambda: LambdaSpec(0.65, 0.85))
    rule: str = DEFAULT_RULE
    evaluation_sampling: bool = False

    def __post_init__(self):
        if self.draws < 1:
            raise ConfigurationError(f"draws must be >= 1, got {self.draws}")
        check_rule(self.rule)


@dataclass(frozen=True)
class AcceptabilityRow:
    alternative: str
    dm: str
    pi: tuple[float, ...]
    se: tuple[float, ...]
    modal: int  # 1-based category index; ties resolve to the riskier category
    type_i: Optional[float]
    type_ii: Optional[float]


@dataclass(frozen=True)
class AcceptabilityReport:
    categories: tuple[str, ...]
    rows: tuple[AcceptabilityRow, ...]
    draws: int
    seed: int
    rule: str
    cutoff: int

    def row(self, alternative: str, dm: Optional[str] = None) -> AcceptabilityRow:
        for r in self.rows:
            if r.alternative == alternative and (dm is None or r.dm == dm):
                return r
        raise KeyError((alternative, dm))


def modal_category(pi: Sequence[float]) -> int:
    """Index (1-based) of the most likely category; ties go to the riskier
    (lower) category, the prudential reading for credit decisions."""
    return int(np.argmax(pi)) + 1


def error_rates(pi: Sequence[float], cutoff: int) -> tuple[Optional[float], Optional[float]]:
    """Misclassification mass given the high/low-risk split at `cutoff`.

    Categories 1..cutoff are high risk, the rest low risk. When the modal
    category is low risk the type I error is the probability mass stranded
    in high-risk categories (and type II is not applicable); symmetrically
    for a high-risk modal category.
    """
    p = len(pi)
    if not 1 <= cutoff <= p - 1:
        raise ConfigurationError(f"cutoff must lie in 1..{p - 1}, got {cutoff}")
    modal = modal_category(pi)
    high_risk_mass = float(sum(pi[:cutoff]))
    low_risk_mass = float(sum(pi[cutoff:]))
    if modal > cutoff:
        return high_risk_mass, None
    return None, low_risk_mass


def interval_weights_from_dms(
    dm_vectors: Sequence[Mapping[str, float]],
) -> dict[str, tuple[float, float]]:
    """Componentwise [min, max] of several weight vectors, per criterion."""
    if not dm_vectors:
        raise ConfigurationError("need at least one weight vector")
    keys = set(dm_vectors[0])
    for v in dm_vectors[1:]:
        if set(v) != keys:
            raise ConfigurationError("weight vectors cover different criteria")
    return {
        cid: (min(float(v[cid]) for v in dm_vectors), max(float(v[cid]) for v in dm_vectors))
        for cid in dm_vectors[0]
    }


def default_cutoff(n_categories: int) -> int:
    """High/low-risk split used when none is configured: the two best
    categories count as low risk (minimum one high-risk category)."""
    return max(1, n_categories - 2)


def _sample_values(project: Project, lo: np.ndarray, hi: np.ndarray,
                   cells: list[tuple[int, int]], ordinal: np.ndarray,
                   rng: np.random.Generator) -> np.ndarray:
    values = lo.copy()
    for (i, j) in cells:
        if ordinal[j]:
            values[i, j] = rng.integers(int(lo[i, j]), int(hi[i, j]) + 1)
        else:
            values[i, j] = rng.uniform(lo[i, j], hi[i, j])
    return values


def _count_chunk(indices: range, project: Project, prepared: _PreparedSampler,
                 config: RunConfig, lo: np.ndarray, hi: np.ndarray,
                 cells: list, ordinal: np.ndarray, profiles: np.ndarray,
                 midpoints: np.ndarray) -> np.ndarray:
    m = len(project.alternatives)
    p = project.n_categories
    counts = np.zeros((m, p), dtype=np.int64)
    criteria = project.criteria
    lam_lo, lam_hi = config.lam.lo, config.lam.hi
    sampling = config.evaluation_sampling and bool(cells)
    fixed_scores = None
    if prepared.mode == "fixed" and not sampling:
        # weights and evaluations are constant across draws: score once.
        # The per-draw streams are consumed identically either way, so this
        # cannot change any count.
        up, down = score_tensor(midpoints, profiles, criteria, prepared.fixed)
        fixed_scores = (np.asarray(up), np.asarray(down))
    for i in indices:
        rng = draw_rng(config.seed, i)
        w = prepared.draw(rng)
        lam = float(rng.uniform(lam_lo, lam_hi)) if lam_hi > lam_lo else lam_lo
        if fixed_scores is not None:
            up, down = fixed_scores
        else:
            if sampling:
                values = _sample_values(project, lo, hi, cells, ordinal, rng)
            else:
                values = midpoints
            up, down = score_tensor(values, profiles, criteria, w)
        for a in range(m):
            cat = _assign_fast(up[a], down[a], lam, config.rule)
            counts[a, cat - 1] += 1
    return counts


def _assign_fast(up: np.ndarray, down: np.ndarray, lam: float, rule: str) -> int:
    n = len(up)
    if rule == "pessimistic":
        for k in range(n - 1, -1, -1):
            if up[k] >= lam:
                return k + 2
        return 1
    if rule == "pessimistic-strict":
        for k in range(n - 1, -1, -1):
            if up[k] >= lam and down[k] < lam:
                return k + 2
        return 1
    for k in range(n):
        if down[k] >= lam and up[k] < lam:
            return k + 1
    return n + 1


def run_smaa(project: Project, sampler: WeightSampler, config: RunConfig, *,
             workers: int = 1, cutoff: Optional[int] = None,
             dm_label: str = "run") -> AcceptabilityReport:
    """Acceptability indices over `config.draws` Monte Carlo draws.

    Per draw: weights from the sampler, lambda uniform on the configured
    range, interval evaluations resampled per cell when enabled (otherwise
    intervals contribute their midpoints). Counting is exact and the merge
    across workers is a commutative integer sum, so the report depends only
    on (project, sampler, config), never on `workers`.
    """
    prepared = sampler.prepare(project.criterion_ids)
    lo, hi = project.evaluation_bounds()
    ordinal = np.array([c.is_ordinal for c in project.criteria])
    cells = [tuple(ij) for ij in np.argwhere(hi > lo)]
    profiles = project.profile_tensor()
    midpoints = 0.5 * (lo + hi)
    p = project.n_categories
    cutoff = default_cutoff(p) if cutoff is None else cutoff
    if not 1 <= cutoff <= p - 1:
        raise ConfigurationError(f"cutoff must lie in 1..{p - 1}, got {cutoff}")

    chunks = _partition(config.draws, max(1, workers))
    if len(chunks) == 1:
        counts = _count_chunk(chunks[0], project, prepared, config, lo, hi, cells,
                              ordinal, profiles, midpoints)
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            parts = pool.map(
                lambda chunk: _count_chunk(chunk, project, prepared, config, lo, hi,
                                           cells, ordinal, profiles, midpoints),
                chunks,
            )
            counts = sum(parts, np.zeros((len(project.alternatives), p), dtype=np.int64))

    rows = []
    for a, alt in enumerate(project.alternatives):
        pi = counts[a] / config.draws
        se = np.sqrt(pi * (1.0 - pi) / config.draws)
        t1, t2 = error_rates(pi, cutoff)
        rows.append(AcceptabilityRow(
            alternative=alt.id,
            dm=dm_label,
            pi=tuple(pi.tolist()),
            se=tuple(se.tolist()),
            modal=modal_category(pi),
            type_i=t1,
            type_ii=t2,
        ))
    return AcceptabilityReport(
        categories=project.scheme.categories,
        rows=tuple(rows),
        draws=config.draws,
        seed=config.seed,
        rule=config.rule,
        cutoff=cutoff,
    )


def _partition(draws: int, workers: int) -> list[range]:
    bounds = np.linspace(0, draws, num=min(workers, draws) + 1, dtype=int)
    return [range(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def exact_acceptability(project: Project, weights: Mapping[str, float],
                        lam: LambdaSpec, rule: str = DEFAULT_RULE, *,
                        cutoff: Optional[int] = None,
                        dm_label: str = "exact") -> AcceptabilityReport:
    """Analytic acceptability for fixed weights and point evaluations.

    With those fixed, the assignment is a step function of lambda, so each
    acceptability equals the measure of the lambda sub-range mapping to the
    category, divided by the range width. Serves as the independent check
    on the Monte Carlo path.
    """
    if project.has_interval_evaluations():
        raise UnsupportedInputError(
            "exact acceptability requires point evaluations; sample intervals instead"
        )
    check_rule(rule)
    w = check_weight_vector(weights, project.criterion_ids)
    lo, hi = project.evaluation_bounds()
    up, down = score_tensor(lo, project.profile_tensor(), project.criteria, w)
    p = project.n_categories
    cutoff = default_cutoff(p) if cutoff is None else cutoff

    rows = []
    for a, alt in enumerate(project.alternatives):
        scores = OutrankingScores(tuple(up[a].tolist()), tuple(down[a].tolist()))
        pi = np.zeros(p)
        if lam.width == 0:
            pi[assign(scores, lam.lo, rule) - 1] = 1.0
        else:
            for iv in lambda_breakpoints(scores, rule):
                overlap = min(iv.hi, lam.hi) - max(iv.lo, lam.lo)
                if overlap > 0:
                    pi[iv.category - 1] += overlap / lam.width
            pi /= pi.sum()  # exact tiling; renormalize away float crumbs
        t1, t2 = error_rates(pi, cutoff)
        rows.append(AcceptabilityRow(
            alternative=alt.id,
            dm=dm_label,
            pi=tuple(pi.tolist()),
            se=tuple([0.0] * p),
            modal=modal_category(pi),
            type_i=t1,
            type_ii=t2,
        ))
    return AcceptabilityReport(
        categories=project.scheme.categories,
        rows=tuple(rows),
        draws=0,
        seed=0,
        rule=rule,
        cutoff=cutoff,
    )
