"""Bundled case study: four innovative start-ups rated by five credit officers.

The fixtures mirror the originally published inputs (evaluation matrix,
limit profiles, officer weights, cash flows) and the originally reported
outputs. Reported outputs are reference targets only: the original runs'
rule variant and parameter handling are not fully specified, so the engine
emits a per-cell deviation table instead of asserting reproduction.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .finance import CashFlowSeries, npv, apply_scenario, ScenarioSpec
from .project_io import GROUP_DM, ProjectFile, load_project, parse_deck
from .simos import CardDeck
from .smaa import AcceptabilityReport, RunConfig, WeightSampler, run_smaa

_DATA = resources.files("risksort") / "data"

CASE_STUDY = "case_study.json"
CASE_STUDY_INTERVALS = "case_study_intervals.json"
DM1_DECK = "dm1_deck.json"
CASH_FLOWS = "cash_flows.json"
REPORTED_RESULTS = "reported_results.json"
MANIFEST = "MANIFEST.sha256"


def data_path(name: str):
    return _DATA / name


def load_case_study(intervals: bool = False) -> ProjectFile:
    name = CASE_STUDY_INTERVALS if intervals else CASE_STUDY
    with resources.as_file(data_path(name)) as path:
        return load_project(path)


def load_dm1_deck() -> CardDeck:
    return parse_deck(json.loads(data_path(DM1_DECK).read_text()))


def load_cash_flows() -> dict:
    data = json.loads(data_path(CASH_FLOWS).read_text())
    data["series"] = {
        label: CashFlowSeries(tuple(flows), label=label)
        for label, flows in data["series"].items()
    }
    return data


def load_reported_results() -> dict:
    return json.loads(data_path(REPORTED_RESULTS).read_text())


def verify_manifest() -> list[str]:
    """Recompute fixture checksums; returns the names that do not match."""
    bad = []
    for line in data_path(MANIFEST).read_text().splitlines():
        digest, name = line.split()
        actual = hashlib.sha256(data_path(name).read_bytes()).hexdigest()
        if actual != digest:
            bad.append(name)
    return bad


@dataclass(frozen=True)
class Deviation:
    table: str
    cell: str
    ours: float
    reported: float

    @property
    def delta(self) -> float:
        return self.ours - self.reported

    def __str__(self) -> str:
        return (f"{self.table} {self.cell}: ours={self.ours:.4f} "
                f"reported={self.reported:.4f} delta={self.delta:+.4f}")


def _report_deviations(table: str, report: AcceptabilityReport,
                       reported_cells: dict, out: list[Deviation]) -> None:
    for row in report.rows:
        ref = reported_cells.get(row.alternative)
        if ref is None:
            continue
        for k, (ours, rep) in enumerate(zip(row.pi, ref), start=1):
            out.append(Deviation(table, f"{row.alternative}/{row.dm}/pi_{k}", ours, rep))


def deviation_report(*, draws: int = 10_000, seed: int = 42,
                     rule: Optional[str] = None,
                     workers: int = 1) -> tuple[list[Deviation], dict[str, AcceptabilityReport]]:
    """Run the bundled case study and diff it against the reported outputs.

    Covers the per-officer acceptability tables, the group (interval-weight)
    run and the scenario NPVs. Returns the deviations plus the reports they
    were computed from, keyed by run label.
    """
    pf = load_case_study()
    reported = load_reported_results()
    rule = rule or pf.run.rule
    deviations: list[Deviation] = []
    reports: dict[str, AcceptabilityReport] = {}

    for dm in pf.decision_makers:
        config = RunConfig(draws=draws, seed=seed, lam=pf.lam, rule=rule)
        report = run_smaa(pf.project, dm.sampler(), config, workers=workers,
                          cutoff=pf.risk_cutoff, dm_label=dm.id)
        reports[dm.id] = report
        _report_deviations("dm_acceptability", report,
                           reported["dm_acceptability"][dm.id], deviations)

    group = WeightSampler.intervals(pf.group_bounds())
    config = RunConfig(draws=draws, seed=seed, lam=pf.lam, rule=rule)
    group_report = run_smaa(pf.project, group, config, workers=workers,
                            cutoff=pf.risk_cutoff, dm_label=GROUP_DM)
    reports[GROUP_DM] = group_report
    _report_deviations("group_acceptability", group_report,
                       reported["group_acceptability"], deviations)

    cash = load_cash_flows()
    for label, series in cash["series"].items():
        for key, scenario in (("base", 0.0), ("0.2", 0.2), ("0.4", 0.4)):
            value = npv(apply_scenario(series, ScenarioSpec(scenario)), cash["rate"])
            deviations.append(Deviation("npv", f"{label}/{key}", value,
                                        cash["reported_npv"][label][key]))
    return deviations, reports


def format_deviation_table(deviations: list[Deviation]) -> str:
    lines = [f"{len(deviations)} cells compared against the reported tables"]
    lines += [str(d) for d in deviations]
    return "\n".join(lines)
