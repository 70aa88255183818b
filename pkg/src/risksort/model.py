"""Shared domain vocabulary: criteria, alternatives, limit profiles, categories.

Everything here is immutable after construction and safe to share across
concurrent simulation workers. Data problems are collected into a
ValidationReport rather than raised; genuinely bad run parameters raise
ConfigurationError.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

import numpy as np

GAIN = "gain"
COST = "cost"

WEIGHT_SUM_TOL = 1e-9


class ConfigurationError(ValueError):
    """A run parameter is outside its contract (bad lambda, weights, z, ...)."""


class UnsupportedInputError(ValueError):
    """The operation does not support this input shape (e.g. interval data)."""


class InsufficientDataError(ValueError):
    """Too few observations to compute the requested statistic."""


@dataclass(frozen=True)
class Evaluation:
    """A point or interval score of one alternative on one criterion."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError(f"evaluation bounds must be finite, got [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"evaluation interval reversed: [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, value: float) -> "Evaluation":
        return cls(float(value), float(value))

    @classmethod
    def interval(cls, lo: float, hi: float) -> "Evaluation":
        return cls(float(lo), float(hi))

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


@dataclass(frozen=True)
class CriterionSpec:
    """One evaluation axis.

    scale is either an (lo, hi) integer pair for ordinal criteria or None for
    ratio criteria. q <= p are the indifference / preference thresholds, v an
    optional veto threshold with v >= p.
    """

    id: str
    group: str
    direction: str = GAIN
    scale: Optional[tuple[int, int]] = None
    q: float = 0.0
    p: float = 0.0
    v: Optional[float] = None

    @property
    def is_ordinal(self) -> bool:
        return self.scale is not None

    @property
    def is_cost(self) -> bool:
        return self.direction == COST


@dataclass(frozen=True)
class Alternative:
    """An entity to be sorted, with one evaluation per project criterion."""

    id: str
    evaluations: Mapping[str, Evaluation]
    sector: Optional[str] = None


@dataclass(frozen=True)
class LambdaSpec:
    """Cutting-level range; degenerate lo == hi pins lambda to a point."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (0.5 <= self.lo <= self.hi <= 1.0):
            raise ConfigurationError(
                f"lambda range must satisfy 0.5 <= lo <= hi <= 1, got [{self.lo}, {self.hi}]"
            )

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class ProfileScheme:
    """Ordered categories delimited by limit profiles b_1..b_{p-1}.

    base_profiles maps criterion id -> (b_1..b_{p-1}) values, profile k being
    the upper limit of category k and the lower limit of category k+1.
    overrides replace whole columns per sector (never single cells).
    """

    categories: tuple[str, ...]
    base_profiles: Mapping[str, tuple[float, ...]]
    overrides: Mapping[str, Mapping[str, tuple[float, ...]]] = field(default_factory=dict)

    @property
    def n_categories(self) -> int:
        return len(self.categories)

    @property
    def n_profiles(self) -> int:
        return len(self.categories) - 1

    def column(self, criterion_id: str, sector: Optional[str] = None) -> tuple[float, ...]:
        """Profile values for one criterion, honouring sector overrides."""
        if sector is not None:
            override = self.overrides.get(sector, {})
            if criterion_id in override:
                return tuple(override[criterion_id])
        return tuple(self.base_profiles[criterion_id])

    def matrix(self, criteria: Sequence[CriterionSpec], sector: Optional[str] = None) -> np.ndarray:
        """(n_profiles, n_criteria) array of effective profile values."""
        cols = [self.column(c.id, sector) for c in criteria]
        return np.array(cols, dtype=float).T


@dataclass(frozen=True)
class Project:
    """A validated sorting problem: criteria, alternatives and profiles."""

    criteria: tuple[CriterionSpec, ...]
    alternatives: tuple[Alternative, ...]
    scheme: ProfileScheme

    @property
    def criterion_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.criteria)

    @property
    def alternative_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.alternatives)

    @property
    def n_categories(self) -> int:
        return self.scheme.n_categories

    def criterion(self, criterion_id: str) -> CriterionSpec:
        for c in self.criteria:
            if c.id == criterion_id:
                return c
        raise KeyError(criterion_id)

    def alternative(self, alternative_id: str) -> Alternative:
        for a in self.alternatives:
            if a.id == alternative_id:
                return a
        raise KeyError(alternative_id)

    def evaluation_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """(lo, hi) arrays of shape (n_alternatives, n_criteria)."""
        lo = np.empty((len(self.alternatives), len(self.criteria)))
        hi = np.empty_like(lo)
        for i, alt in enumerate(self.alternatives):
            for j, crit in enumerate(self.criteria):
                ev = alt.evaluations[crit.id]
                lo[i, j] = ev.lo
                hi[i, j] = ev.hi
        return lo, hi

    def profile_tensor(self) -> np.ndarray:
        """(n_alternatives, n_profiles, n_criteria) effective profile values."""
        return np.stack([self.scheme.matrix(self.criteria, a.sector) for a in self.alternatives])

    def has_interval_evaluations(self) -> bool:
        return any(
            not ev.is_point for alt in self.alternatives for ev in alt.evaluations.values()
        )


@dataclass(frozen=True)
class Violation:
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    def add(self, location: str, message: str) -> None:
        self.violations.append(Violation(location, message))

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:  # truthy when clean, mirrors "empty report iff valid"
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "no violations"
        return "\n".join(str(v) for v in self.violations)


def _is_integral(x: float) -> bool:
    return float(x) == int(x)


def _at_least_as_good(a: float, b: float, direction: str) -> bool:
    return a >= b if direction == GAIN else a <= b


def _validate_criteria(criteria: Sequence[CriterionSpec], report: ValidationReport) -> None:
    seen = set()
    for c in criteria:
        loc = f"criterion[{c.id}]"
        if c.id in seen:
            report.add(loc, "duplicate criterion id")
        seen.add(c.id)
        if c.direction not in (GAIN, COST):
            report.add(loc, f"direction must be '{GAIN}' or '{COST}', got {c.direction!r}")
        if c.q < 0:
            report.add(loc, f"indifference threshold q must be >= 0, got {c.q}")
        if c.p < c.q:
            report.add(loc, f"preference threshold p={c.p} must be >= q={c.q}")
        if c.v is not None and c.v < c.p:
            report.add(loc, f"veto threshold v={c.v} must be >= p={c.p}")
        if c.scale is not None:
            lo, hi = c.scale
            if not (_is_integral(lo) and _is_integral(hi)):
                report.add(loc, f"ordinal scale bounds must be integers, got {c.scale}")
            elif not lo < hi:
                report.add(loc, f"ordinal scale requires min < max, got {c.scale}")


def _validate_alternatives(
    criteria: Sequence[CriterionSpec],
    alternatives: Sequence[Alternative],
    report: ValidationReport,
) -> None:
    ids = {c.id: c for c in criteria}
    seen = set()
    for alt in alternatives:
        loc = f"alternative[{alt.id}]"
        if alt.id in seen:
            report.add(loc, "duplicate alternative id")
        seen.add(alt.id)
        missing = set(ids) - set(alt.evaluations)
        extra = set(alt.evaluations) - set(ids)
        if missing:
            report.add(loc, f"missing evaluations for {sorted(missing)}")
        if extra:
            report.add(loc, f"evaluations for unknown criteria {sorted(extra)}")
        for cid, ev in alt.evaluations.items():
            crit = ids.get(cid)
            if crit is None or crit.scale is None:
                continue
            cloc = f"{loc}.evaluation[{cid}]"
            lo, hi = crit.scale
            if not (_is_integral(ev.lo) and _is_integral(ev.hi)):
                report.add(cloc, f"ordinal evaluation must be integer-valued, got [{ev.lo}, {ev.hi}]")
            if ev.lo < lo or ev.hi > hi:
                report.add(cloc, f"evaluation [{ev.lo}, {ev.hi}] outside scale bounds [{lo}, {hi}]")


def _validate_profile_columns(
    label: str,
    columns: Mapping[str, tuple[float, ...]],
    criteria_by_id: Mapping[str, CriterionSpec],
    n_profiles: int,
    report: ValidationReport,
    require_all: bool,
) -> None:
    if require_all:
        missing = set(criteria_by_id) - set(columns)
        if missing:
            report.add(label, f"missing profile columns for {sorted(missing)}")
    for cid, col in columns.items():
        loc = f"{label}.column[{cid}]"
        crit = criteria_by_id.get(cid)
        if crit is None:
            report.add(loc, "profile column for unknown criterion")
            continue
        if len(col) != n_profiles:
            report.add(loc, f"expected {n_profiles} profile values, got {len(col)}")
            continue
        for k in range(len(col) - 1):
            if not _at_least_as_good(col[k + 1], col[k], crit.direction):
                report.add(
                    loc,
                    f"profile dominance violated between b_{k + 1} and b_{k + 2}: "
                    f"{col[k]} -> {col[k + 1]} ({crit.direction})",
                )


def _validate_scheme(
    criteria: Sequence[CriterionSpec],
    alternatives: Sequence[Alternative],
    scheme: ProfileScheme,
    report: ValidationReport,
) -> None:
    by_id = {c.id: c for c in criteria}
    if scheme.n_categories < 2:
        report.add("scheme", f"need at least 2 categories, got {scheme.n_categories}")
        return
    if len(set(scheme.categories)) != len(scheme.categories):
        report.add("scheme", "duplicate category names")
    _validate_profile_columns(
        "scheme.base", scheme.base_profiles, by_id, scheme.n_profiles, report, require_all=True
    )
    for sector, columns in scheme.overrides.items():
        label = f"scheme.override[{sector}]"
        _validate_profile_columns(
            label, columns, by_id, scheme.n_profiles, report, require_all=False
        )
        for cid in columns:
            crit = by_id.get(cid)
            # sector-specific limit profiles are a financial-scale notion;
            # ordinal (qualitative) profile columns are common to all sectors
            if crit is not None and crit.scale is not None:
                report.add(f"{label}.column[{cid}]",
                           "ordinal profile columns cannot vary by sector")


def validate_project(
    criteria: Sequence[CriterionSpec],
    alternatives: Sequence[Alternative],
    scheme: ProfileScheme,
) -> ValidationReport:
    """Check every structural invariant; an empty report means the data is sound.

    Violations are data, not faults: nothing is raised here.
    """
    report = ValidationReport()
    _validate_criteria(criteria, report)
    _validate_alternatives(criteria, alternatives, report)
    _validate_scheme(criteria, alternatives, scheme, report)
    return report


def validate(project: Project) -> ValidationReport:
    return validate_project(project.criteria, project.alternatives, project.scheme)


def flip_criterion_direction(project: Project, criterion_id: str) -> Project:
    """Toggle one criterion between gain and cost, negating all its values.

    Applying this twice returns an equal project, and validation verdicts are
    preserved either way.
    """
    criteria = []
    for c in project.criteria:
        if c.id != criterion_id:
            criteria.append(c)
            continue
        scale = None if c.scale is None else (-c.scale[1], -c.scale[0])
        criteria.append(
            replace(c, direction=COST if c.direction == GAIN else GAIN, scale=scale)
        )
    alternatives = []
    for alt in project.alternatives:
        evals = dict(alt.evaluations)
        ev = evals[criterion_id]
        evals[criterion_id] = Evaluation(-ev.hi, -ev.lo)
        alternatives.append(replace(alt, evaluations=evals))
    base = dict(project.scheme.base_profiles)
    if criterion_id in base:
        base[criterion_id] = tuple(-x for x in base[criterion_id])
    overrides = {}
    for sector, cols in project.scheme.overrides.items():
        cols = dict(cols)
        if criterion_id in cols:
            cols[criterion_id] = tuple(-x for x in cols[criterion_id])
        overrides[sector] = cols
    scheme = replace(project.scheme, base_profiles=base, overrides=overrides)
    return Project(tuple(criteria), tuple(alternatives), scheme)


def check_weight_vector(weights: Mapping[str, float], criterion_ids: Sequence[str],
                        owner: str = "weights") -> np.ndarray:
    """Validate a criterion->weight mapping and return it as an ordered array.

    Raises ConfigurationError on negative entries, a sum off 1 by more than
    1e-9, or a key set that does not match the project criteria.
    """
    missing = set(criterion_ids) - set(weights)
    extra = set(weights) - set(criterion_ids)
    if missing or extra:
        raise ConfigurationError(
            f"{owner}: weight keys do not match criteria"
            + (f"; missing {sorted(missing)}" if missing else "")
            + (f"; unknown {sorted(extra)}" if extra else "")
        )
    w = np.array([float(weights[cid]) for cid in criterion_ids])
    if (w < 0).any():
        raise ConfigurationError(f"{owner}: weights must be nonnegative")
    total = float(w.sum())
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ConfigurationError(f"{owner}: weights must sum to 1, got {total!r}")
    return w
