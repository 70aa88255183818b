"""Interactive what-if runs: overlay patches on a project without mutating it.

An overlay can impose veto thresholds, replace evaluations, move the lambda
range, switch the assignment rule and pick the weight source. The response
couples the Monte Carlo report with a lambda-breakpoint table per
alternative and a knock-out diagnostic for veto criteria.

Knock-out convention: a veto threshold makes full opposition (discordance 1)
on a single criterion disqualifying. An alternative whose prudential
evaluation is fully vetoed against any limit profile is flagged and shown in
the worst category, the way credit practice treats a missing prerequisite;
the underlying acceptability row is reported unchanged alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional

import numpy as np

from .model import (
    ConfigurationError,
    Evaluation,
    LambdaSpec,
    Project,
    validate,
)
from .outranking import breakpoint_diagnostics, partial_discordance, project_scores
from .project_io import GROUP_DM, ProjectFile, ProjectValidationError
from .smaa import AcceptabilityReport, RunConfig, WeightSampler, run_smaa

DEFAULT_WHATIF_DRAWS = 2_000
MAX_WHATIF_DRAWS = 20_000  # what-if calls are synchronous; keep them snappy


@dataclass(frozen=True)
class WhatIfOverlay:
    """Patches applied on top of a stored project for one interactive run."""

    dm: Optional[str] = None  # DM id, "group", or None for the group default
    veto: Mapping[str, float] = field(default_factory=dict)
    evaluations: Mapping[str, Mapping[str, Evaluation]] = field(default_factory=dict)
    lam: Optional[LambdaSpec] = None
    rule: Optional[str] = None
    draws: int = DEFAULT_WHATIF_DRAWS
    seed: Optional[int] = None
    evaluation_sampling: Optional[bool] = None


@dataclass(frozen=True)
class AlternativeDiagnostic:
    alternative: str
    intervals: tuple[tuple[float, float, int], ...]
    non_monotone: bool
    skips_categories: bool
    fragile: bool
    knocked_out: bool
    effective_pi: tuple[float, ...]
    effective_modal: int


@dataclass(frozen=True)
class WhatIfResult:
    report: AcceptabilityReport
    diagnostics: tuple[AlternativeDiagnostic, ...]
    knockouts: tuple[str, ...]


def _patched_project(project: Project, overlay: WhatIfOverlay) -> Project:
    criteria = tuple(
        replace(c, v=float(overlay.veto[c.id])) if c.id in overlay.veto else c
        for c in project.criteria
    )
    unknown = set(overlay.veto) - {c.id for c in project.criteria}
    if unknown:
        raise ConfigurationError(f"veto overlay names unknown criteria {sorted(unknown)}")
    alternatives = []
    for alt in project.alternatives:
        patch = overlay.evaluations.get(alt.id)
        if not patch:
            alternatives.append(alt)
            continue
        evals = dict(alt.evaluations)
        evals.update(patch)
        alternatives.append(replace(alt, evaluations=evals))
    unknown = set(overlay.evaluations) - {a.id for a in project.alternatives}
    if unknown:
        raise ConfigurationError(f"evaluation overlay names unknown alternatives {sorted(unknown)}")
    patched = Project(criteria, tuple(alternatives), project.scheme)
    report = validate(patched)
    if not report.ok:
        raise ProjectValidationError(report)
    return patched


def _sampler_for(pf: ProjectFile, dm: Optional[str]) -> tuple[WeightSampler, str]:
    if dm is None or dm == GROUP_DM:
        if pf.decision_makers:
            return WeightSampler.intervals(pf.group_bounds()), GROUP_DM
        return WeightSampler.simplex_uniform(), "uniform"
    return pf.decision_maker(dm).sampler(), dm


def _central_weights(pf: ProjectFile, dm_label: str) -> dict[str, float]:
    """Deterministic weights for the breakpoint table: the DM's own vector
    when fixed, otherwise the normalized midpoint of the interval bounds,
    or equal weights when nothing narrows the simplex."""
    ids = pf.project.criterion_ids
    if dm_label not in (GROUP_DM, "uniform"):
        dm = pf.decision_maker(dm_label)
        if dm.interval_weights is None:
            return dm.resolve_weights()
        mids = np.array([0.5 * (lo + hi) for lo, hi in
                         (dm.interval_weights[c] for c in ids)])
        return dict(zip(ids, (mids / mids.sum()).tolist()))
    if dm_label == GROUP_DM and pf.decision_makers:
        bounds = pf.group_bounds()
        mids = np.array([0.5 * (bounds[c][0] + bounds[c][1]) for c in ids])
        return dict(zip(ids, (mids / mids.sum()).tolist()))
    return {c: 1.0 / len(ids) for c in ids}


def _worst_value(ev: Evaluation, is_cost: bool) -> float:
    return ev.hi if is_cost else ev.lo


def veto_knockouts(project: Project) -> list[str]:
    """Alternatives fully vetoed on some criterion against some profile,
    judged at the prudential end of each evaluation."""
    out = []
    veto_criteria = [(j, c) for j, c in enumerate(project.criteria) if c.v is not None]
    if not veto_criteria:
        return out
    for alt in project.alternatives:
        profiles = project.scheme.matrix(project.criteria, alt.sector)
        hit = False
        for j, crit in veto_criteria:
            a_val = _worst_value(alt.evaluations[crit.id], crit.is_cost)
            for k in range(profiles.shape[0]):
                if partial_discordance(a_val, profiles[k, j], crit.p, crit.v,
                                       crit.direction) >= 1.0:
                    hit = True
                    break
            if hit:
                break
        if hit:
            out.append(alt.id)
    return out


def run_whatif(pf: ProjectFile, overlay: WhatIfOverlay, *, workers: int = 1) -> WhatIfResult:
    """Execute one interactive run against a patched copy of the project."""
    if overlay.draws > MAX_WHATIF_DRAWS:
        raise ConfigurationError(
            f"what-if runs are capped at {MAX_WHATIF_DRAWS} draws, got {overlay.draws}; "
            "use an asynchronous run for more"
        )
    project = _patched_project(pf.project, overlay)
    sampler, dm_label = _sampler_for(pf, overlay.dm)
    lam = overlay.lam or pf.lam
    rule = overlay.rule or pf.run.rule
    sampling = overlay.evaluation_sampling
    if sampling is None:
        sampling = pf.run.evaluation_sampling or project.has_interval_evaluations()
    config = RunConfig(
        draws=overlay.draws,
        seed=pf.run.seed if overlay.seed is None else overlay.seed,
        lam=lam,
        rule=rule,
        evaluation_sampling=sampling,
    )
    report = run_smaa(project, sampler, config, workers=workers,
                      cutoff=pf.risk_cutoff, dm_label=dm_label)

    knockouts = tuple(veto_knockouts(project))
    scores = project_scores(project, _central_weights(pf, dm_label))
    diagnostics = []
    p = project.n_categories
    for row in report.rows:
        table = breakpoint_diagnostics(scores[row.alternative], rule)
        knocked = row.alternative in knockouts
        effective = tuple([1.0] + [0.0] * (p - 1)) if knocked else row.pi
        diagnostics.append(AlternativeDiagnostic(
            alternative=row.alternative,
            intervals=tuple((iv.lo, iv.hi, iv.category) for iv in table.intervals),
            non_monotone=table.non_monotone,
            skips_categories=table.skips_categories,
            fragile=table.fragile,
            knocked_out=knocked,
            effective_pi=effective,
            effective_modal=1 if knocked else row.modal,
        ))
    return WhatIfResult(report=report, diagnostics=tuple(diagnostics), knockouts=knockouts)
