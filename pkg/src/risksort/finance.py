"""Business-plan preprocessing: scenario cash flows, NPV, quartile profiles.

Discounting convention: flows are indexed t = 1..T and each flow is
discounted t periods (end-of-year). Scenario severities are pessimistic in
both directions: inflows shrink, outflows grow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .model import GAIN, ConfigurationError, InsufficientDataError


@dataclass(frozen=True)
class CashFlowSeries:
    """Yearly cash flows, first entry at year 1."""

    flows: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        if not self.flows:
            raise ValueError("cash-flow series needs at least one year")

    @property
    def years(self) -> int:
        return len(self.flows)


@dataclass(frozen=True)
class ScenarioSpec:
    """Severity of a worst-case scenario, e.g. 0.2 lowers flows by 20%."""

    severity: float

    def __post_init__(self):
        if not 0.0 <= self.severity < 1.0:
            raise ValueError(f"severity must lie in [0, 1), got {self.severity}")


def apply_scenario(series: CashFlowSeries, spec: ScenarioSpec) -> CashFlowSeries:
    """Lower the series pessimistically: positive flows scale by (1 - s),
    negative flows by (1 + s), zeros stay put."""
    s = spec.severity
    flows = tuple(
        f * (1.0 - s) if f > 0 else f * (1.0 + s) if f < 0 else 0.0
        for f in series.flows
    )
    label = series.label and f"{series.label} (lowered {s:.0%})"
    return CashFlowSeries(flows, label)


def npv(series: CashFlowSeries, rate: float) -> float:
    """Net present value at the given rate, flows discounted from year 1 up."""
    if rate <= -1.0:
        raise ConfigurationError(f"discount rate must exceed -1, got {rate}")
    total = 0.0
    for t, flow in enumerate(series.flows, start=1):
        total += flow / (1.0 + rate) ** t
    return total


@dataclass(frozen=True)
class SectorRatioSample:
    """Observed values of one financial ratio across a sector's firm-years."""

    ratio_id: str
    observations: tuple[float, ...]

    def __post_init__(self):
        if not self.observations:
            raise ValueError("ratio sample needs at least one observation")


def quartiles(observations: Sequence[float]) -> tuple[float, float, float]:
    """(Q25, Q50, Q75) with linear interpolation between order statistics."""
    if len(observations) < 4:
        raise InsufficientDataError(
            f"need at least 4 observations for quartiles, got {len(observations)}"
        )
    q = np.percentile(np.asarray(observations, dtype=float), [25, 50, 75],
                      method="linear")
    return float(q[0]), float(q[1]), float(q[2])


def profiles_from_quartiles(
    samples: Mapping[str, SectorRatioSample],
    directions: Mapping[str, str],
    cross_sector_best: Mapping[str, float],
) -> dict[str, tuple[float, float, float, float]]:
    """Limit-profile columns (b_1..b_4) for one sector's financial ratios.

    b_1..b_3 are the sector quartiles arranged so b_1 carries the riskiest
    quartile and b_3 the safest under each ratio's direction; b_4 is the
    supplied cross-sector best value. Output columns honour the profile
    dominance order (ties permitted).
    """
    columns: dict[str, tuple[float, float, float, float]] = {}
    for ratio_id, sample in samples.items():
        q25, q50, q75 = quartiles(sample.observations)
        direction = directions[ratio_id]
        best = float(cross_sector_best[ratio_id])
        if direction == GAIN:
            col = (q25, q50, q75, best)
        else:
            col = (q75, q50, q25, best)
        columns[ratio_id] = col
    return columns


def scenario_table(series: CashFlowSeries, rate: float,
                   severities: Sequence[float],
                   reported: Optional[Mapping[str, float]] = None) -> list[dict]:
    """Base plus per-severity rows of (flows, NPV), with optional externally
    reported NPVs echoed for comparison."""
    rows = []
    for s in [0.0, *severities]:
        scenario = apply_scenario(series, ScenarioSpec(s))
        key = "base" if s == 0 else f"{s:g}"
        row = {
            "scenario": key,
            "severity": s,
            "flows": list(scenario.flows),
            "npv": npv(scenario, rate),
        }
        if reported and key in reported:
            row["reported_npv"] = reported[key]
        rows.append(row)
    return rows
