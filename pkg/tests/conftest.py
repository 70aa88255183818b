"""Shared fixtures and the random small-instance generator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pytest

from risksort import (
    Alternative,
    CriterionSpec,
    Evaluation,
    ProfileScheme,
    Project,
)
from risksort.casestudy import load_case_study


@pytest.fixture(scope="session")
def case_study():
    return load_case_study()


@pytest.fixture(scope="session")
def interval_case_study():
    return load_case_study(intervals=True)


@dataclass
class SmallInstance:
    """A random sorting instance in both production and raw-oracle form."""

    project: Project
    weights: dict[str, float]
    # raw mirrors for the reference kernel
    values: list[list[float]]      # per alternative
    profile_rows: list[list[float]]
    w_list: list[float]
    qs: list[float]
    ps: list[float]
    vs: list                       # None when no veto
    gains: list[bool]


def random_instance(rng: np.random.Generator, *, n_max: int = 5, p_max: int = 4,
                    m_alts: int = 2, with_veto: bool = True) -> SmallInstance:
    """Small instance on an integer grid with random thresholds and weights."""
    n = int(rng.integers(1, n_max + 1))
    p_cats = int(rng.integers(2, p_max + 1))
    gains = [bool(rng.integers(0, 2)) for _ in range(n)]
    qs, ps, vs = [], [], []
    for _ in range(n):
        q = int(rng.integers(0, 3))
        p = q + int(rng.integers(0, 3))
        qs.append(float(q))
        ps.append(float(p))
        if with_veto and rng.random() < 0.5:
            vs.append(float(p + int(rng.integers(0, 4))))
        else:
            vs.append(None)

    criteria = tuple(
        CriterionSpec(
            id=f"g{j}", group="g", direction="gain" if gains[j] else "cost",
            scale=None, q=qs[j], p=ps[j], v=vs[j],
        )
        for j in range(n)
    )

    # direction-consistent profile columns on the grid
    columns = {}
    for j in range(n):
        col = np.sort(rng.integers(0, 11, size=p_cats - 1)).astype(float)
        if not gains[j]:
            col = col[::-1]
        columns[f"g{j}"] = tuple(col.tolist())
    scheme = ProfileScheme(
        categories=tuple(f"C{k}" for k in range(1, p_cats + 1)),
        base_profiles=columns,
    )

    values = [[float(rng.integers(0, 11)) for _ in range(n)] for _ in range(m_alts)]
    alternatives = tuple(
        Alternative(
            id=f"a{i}",
            evaluations={f"g{j}": Evaluation.point(values[i][j]) for j in range(n)},
        )
        for i in range(m_alts)
    )
    project = Project(criteria, alternatives, scheme)

    k = rng.integers(1, 10, size=n).astype(float)
    w = k / k.sum()
    weights = {f"g{j}": float(w[j]) for j in range(n)}
    profile_rows = [
        [columns[f"g{j}"][r] for j in range(n)] for r in range(p_cats - 1)
    ]
    return SmallInstance(
        project=project, weights=weights, values=values, profile_rows=profile_rows,
        w_list=w.tolist(), qs=qs, ps=ps, vs=vs, gains=gains,
    )


def safe_lambdas(sigmas, *, extra: int = 0, rng=None) -> list[float]:
    """Lambda probes strictly between the given sigma values (and the 0.5/1
    endpoints), so float summation-order noise cannot flip a comparison."""
    points = sorted({0.5, 1.0, *(s for s in sigmas if 0.5 < s < 1.0)})
    mids = [
        0.5 * (a + b) for a, b in zip(points[:-1], points[1:]) if b - a > 1e-9
    ]
    if rng is not None and extra:
        lo_hi = list(zip(points[:-1], points[1:]))
        for _ in range(extra):
            a, b = lo_hi[int(rng.integers(0, len(lo_hi)))]
            if b - a > 1e-6:
                mids.append(float(rng.uniform(a + 1e-7, b - 1e-7)))
    return mids or [0.75]
