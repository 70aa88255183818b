"""Project-file and report serialization.

Projects travel as a single JSON document with a strict schema: unknown
fields are rejected with their location, and parsing is the exact inverse
of serialization. Reports are written as CSV (fixed column order) or JSON.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

from .finance import CashFlowSeries, SectorRatioSample
from .model import (
    Alternative,
    ConfigurationError,
    CriterionSpec,
    Evaluation,
    LambdaSpec,
    ProfileScheme,
    Project,
    ValidationReport,
    check_weight_vector,
    validate,
)
from .simos import CardDeck
from .smaa import AcceptabilityReport, AcceptabilityRow, RunConfig, WeightSampler

SCHEMA_VERSION = 1

GROUP_DM = "group"


class SchemaError(ValueError):
    """Malformed project or report document; message carries the location."""

    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


class ProjectValidationError(ValueError):
    """The document parsed but the data violates model invariants."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(str(report))


@dataclass(frozen=True)
class DecisionMaker:
    """One decision maker: fixed weights, a card deck, or interval bounds."""

    id: str
    weights: Optional[dict[str, float]] = None
    deck: Optional[CardDeck] = None
    interval_weights: Optional[dict[str, tuple[float, float]]] = None

    def __post_init__(self):
        given = [
            name for name, value in (
                ("weights", self.weights),
                ("deck", self.deck),
                ("interval_weights", self.interval_weights),
            ) if value is not None
        ]
        if len(given) != 1:
            raise ValueError(
                f"decision maker {self.id!r} must carry exactly one of "
                f"weights/deck/interval_weights, got {given or 'none'}"
            )

    def resolve_weights(self) -> dict[str, float]:
        """Fixed weights, resolving a card deck through the Simos procedure."""
        from .simos import simos_resolve

        if self.weights is not None:
            return dict(self.weights)
        if self.deck is not None:
            return simos_resolve(self.deck).weights
        raise ConfigurationError(
            f"decision maker {self.id!r} has interval bounds, not a fixed vector"
        )

    def sampler(self) -> WeightSampler:
        if self.interval_weights is not None:
            return WeightSampler.intervals(self.interval_weights)
        return WeightSampler.fixed(self.resolve_weights())


@dataclass(frozen=True)
class ProjectFile:
    """Everything a run needs, as loaded from one document."""

    project: Project
    decision_makers: tuple[DecisionMaker, ...] = ()
    lam: LambdaSpec = field(default_factory=lambda: LambdaSpec(0.65, 0.85))
    run: RunConfig = field(default_factory=RunConfig)
    risk_cutoff: Optional[int] = None
    cash_flows: dict[str, CashFlowSeries] = field(default_factory=dict)
    ratio_samples: dict[str, dict[str, SectorRatioSample]] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def decision_maker(self, dm_id: str) -> DecisionMaker:
        for dm in self.decision_makers:
            if dm.id == dm_id:
                return dm
        raise KeyError(dm_id)

    def group_bounds(self) -> dict[str, tuple[float, float]]:
        """Componentwise min/max over all fixed-weight decision makers."""
        from .smaa import interval_weights_from_dms

        vectors = [dm.resolve_weights() for dm in self.decision_makers
                   if dm.interval_weights is None]
        if not vectors:
            raise ConfigurationError("group run needs at least one fixed-weight decision maker")
        return interval_weights_from_dms(vectors)


# --------------------------------------------------------------------------
# strict parsing helpers

def _require(obj: Mapping, key: str, path: str) -> Any:
    if key not in obj:
        raise SchemaError(path, f"missing required field {key!r}")
    return obj[key]

def _check_keys(obj: Mapping, path: str, required: Sequence[str],
                optional: Sequence[str] = ()) -> None:
    if not isinstance(obj, Mapping):
        raise SchemaError(path, f"expected an object, got {type(obj).__name__}")
    allowed = set(required) | set(optional)
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{path}.{key}", "unknown field")
    for key in required:
        _require(obj, key, path)

def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {value!r}")
    return float(value)

def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(path, f"expected an integer, got {value!r}")
    return value

def _string(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(path, f"expected a string, got {value!r}")
    return value

def _array(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(path, f"expected an array, got {value!r}")
    return value

def _pair(value: Any, path: str) -> tuple[float, float]:
    arr = _array(value, path)
    if len(arr) != 2:
        raise SchemaError(path, f"expected a [lo, hi] pair, got {value!r}")
    return _number(arr[0], f"{path}[0]"), _number(arr[1], f"{path}[1]")


def _parse_criterion(obj: Any, path: str) -> CriterionSpec:
    _check_keys(obj, path, required=["id", "group", "direction"],
                optional=["scale", "q", "p", "v"])
    scale = obj.get("scale")
    if scale is not None:
        lo, hi = _pair(scale, f"{path}.scale")
        scale = (int(lo), int(hi))
    return CriterionSpec(
        id=_string(obj["id"], f"{path}.id"),
        group=_string(obj["group"], f"{path}.group"),
        direction=_string(obj["direction"], f"{path}.direction"),
        scale=scale,
        q=_number(obj.get("q", 0.0), f"{path}.q"),
        p=_number(obj.get("p", 0.0), f"{path}.p"),
        v=None if obj.get("v") is None else _number(obj["v"], f"{path}.v"),
    )


def _parse_evaluation(value: Any, path: str) -> Evaluation:
    if isinstance(value, list):
        lo, hi = _pair(value, path)
        try:
            return Evaluation.interval(lo, hi)
        except ValueError as exc:
            raise SchemaError(path, str(exc)) from exc
    return Evaluation.point(_number(value, path))


def _parse_alternative(obj: Any, path: str) -> Alternative:
    _check_keys(obj, path, required=["id", "evaluations"], optional=["sector"])
    evals = obj["evaluations"]
    if not isinstance(evals, Mapping):
        raise SchemaError(f"{path}.evaluations", "expected an object")
    return Alternative(
        id=_string(obj["id"], f"{path}.id"),
        sector=None if obj.get("sector") is None else _string(obj["sector"], f"{path}.sector"),
        evaluations={
            cid: _parse_evaluation(v, f"{path}.evaluations.{cid}") for cid, v in evals.items()
        },
    )


def _parse_profile_columns(obj: Any, path: str) -> dict[str, tuple[float, ...]]:
    if not isinstance(obj, Mapping):
        raise SchemaError(path, "expected an object of criterion -> values")
    return {
        cid: tuple(_number(x, f"{path}.{cid}[{i}]") for i, x in enumerate(_array(col, f"{path}.{cid}")))
        for cid, col in obj.items()
    }


def _parse_scheme(obj: Any, categories: tuple[str, ...], path: str) -> ProfileScheme:
    _check_keys(obj, path, required=["base"], optional=["sector_overrides"])
    overrides = {
        sector: _parse_profile_columns(cols, f"{path}.sector_overrides.{sector}")
        for sector, cols in obj.get("sector_overrides", {}).items()
    }
    return ProfileScheme(
        categories=categories,
        base_profiles=_parse_profile_columns(obj["base"], f"{path}.base"),
        overrides=overrides,
    )


def parse_deck(obj: Any, path: str = "deck") -> CardDeck:
    _check_keys(obj, path, required=["ranks", "white_cards", "z"])
    ranks = tuple(
        tuple(_string(cid, f"{path}.ranks[{r}][{i}]") for i, cid in
              enumerate(_array(rank, f"{path}.ranks[{r}]")))
        for r, rank in enumerate(_array(obj["ranks"], f"{path}.ranks"))
    )
    white = tuple(_integer(w, f"{path}.white_cards[{i}]")
                  for i, w in enumerate(_array(obj["white_cards"], f"{path}.white_cards")))
    try:
        return CardDeck(ranks=ranks, white_cards=white, z=_number(obj["z"], f"{path}.z"))
    except ConfigurationError:
        raise  # z <= 1 is a configuration fault, not a malformed document
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def deck_to_dict(deck: CardDeck) -> dict:
    return {
        "ranks": [list(rank) for rank in deck.ranks],
        "white_cards": list(deck.white_cards),
        "z": deck.z,
    }


def _parse_decision_maker(obj: Any, path: str) -> DecisionMaker:
    _check_keys(obj, path, required=["id"],
                optional=["weights", "deck", "interval_weights"])
    weights = obj.get("weights")
    if weights is not None:
        weights = {cid: _number(w, f"{path}.weights.{cid}") for cid, w in weights.items()}
    interval = obj.get("interval_weights")
    if interval is not None:
        interval = {cid: _pair(b, f"{path}.interval_weights.{cid}") for cid, b in interval.items()}
    deck = None if obj.get("deck") is None else parse_deck(obj["deck"], f"{path}.deck")
    try:
        return DecisionMaker(
            id=_string(obj["id"], f"{path}.id"),
            weights=weights, deck=deck, interval_weights=interval,
        )
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from exc


def _parse_run(obj: Any, lam: LambdaSpec, path: str) -> RunConfig:
    _check_keys(obj, path, required=[],
                optional=["draws", "seed", "rule", "evaluation_sampling"])
    kwargs: dict[str, Any] = {"lam": lam}
    if "draws" in obj:
        kwargs["draws"] = _integer(obj["draws"], f"{path}.draws")
    if "seed" in obj:
        kwargs["seed"] = _integer(obj["seed"], f"{path}.seed")
    if "rule" in obj:
        kwargs["rule"] = _string(obj["rule"], f"{path}.rule")
    if "evaluation_sampling" in obj:
        flag = obj["evaluation_sampling"]
        if not isinstance(flag, bool):
            raise SchemaError(f"{path}.evaluation_sampling", f"expected a boolean, got {flag!r}")
        kwargs["evaluation_sampling"] = flag
    return RunConfig(**kwargs)


def parse_project_file(data: Any, *, validate_data: bool = True) -> ProjectFile:
    """Build a ProjectFile from decoded JSON, strictly.

    Raises SchemaError on structural problems and ProjectValidationError
    (carrying the full report) on semantic ones when validate_data is true.
    """
    path = "project"
    _check_keys(data, path,
                required=["schema_version", "criteria", "categories", "profiles",
                          "alternatives"],
                optional=["decision_makers", "lambda", "run", "risk_cutoff",
                          "cash_flows", "ratio_samples"])
    version = _integer(data["schema_version"], f"{path}.schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"{path}.schema_version",
                          f"unsupported version {version}, expected {SCHEMA_VERSION}")
    criteria = tuple(
        _parse_criterion(c, f"{path}.criteria[{i}]")
        for i, c in enumerate(_array(data["criteria"], f"{path}.criteria"))
    )
    categories = tuple(
        _string(c, f"{path}.categories[{i}]")
        for i, c in enumerate(_array(data["categories"], f"{path}.categories"))
    )
    scheme = _parse_scheme(data["profiles"], categories, f"{path}.profiles")
    alternatives = tuple(
        _parse_alternative(a, f"{path}.alternatives[{i}]")
        for i, a in enumerate(_array(data.get("alternatives", []), f"{path}.alternatives"))
    )
    project = Project(criteria=criteria, alternatives=alternatives, scheme=scheme)

    dms = tuple(
        _parse_decision_maker(d, f"{path}.decision_makers[{i}]")
        for i, d in enumerate(_array(data.get("decision_makers", []), f"{path}.decision_makers"))
    )
    try:
        lam = LambdaSpec(*_pair(data.get("lambda", [0.65, 0.85]), f"{path}.lambda"))
        run = _parse_run(data.get("run", {}), lam, f"{path}.run")
    except ConfigurationError:
        raise
    cutoff = None if data.get("risk_cutoff") is None else _integer(
        data["risk_cutoff"], f"{path}.risk_cutoff")

    cash_flows = {}
    for label, flows in (data.get("cash_flows") or {}).items():
        values = tuple(_number(x, f"{path}.cash_flows.{label}[{i}]")
                       for i, x in enumerate(_array(flows, f"{path}.cash_flows.{label}")))
        cash_flows[label] = CashFlowSeries(values, label=label)

    ratio_samples: dict[str, dict[str, SectorRatioSample]] = {}
    for sector, ratios in (data.get("ratio_samples") or {}).items():
        if not isinstance(ratios, Mapping):
            raise SchemaError(f"{path}.ratio_samples.{sector}", "expected an object")
        ratio_samples[sector] = {
            rid: SectorRatioSample(rid, tuple(
                _number(x, f"{path}.ratio_samples.{sector}.{rid}[{i}]")
                for i, x in enumerate(_array(obs, f"{path}.ratio_samples.{sector}.{rid}"))
            ))
            for rid, obs in ratios.items()
        }

    pf = ProjectFile(
        project=project, decision_makers=dms, lam=lam, run=run,
        risk_cutoff=cutoff, cash_flows=cash_flows, ratio_samples=ratio_samples,
        schema_version=version,
    )
    if validate_data:
        report = validate(project)
        _validate_decision_makers(pf, report)
        if not report.ok:
            raise ProjectValidationError(report)
    return pf


def _validate_decision_makers(pf: ProjectFile, report: ValidationReport) -> None:
    ids = list(pf.project.criterion_ids)
    for dm in pf.decision_makers:
        loc = f"decision_maker[{dm.id}]"
        if dm.weights is not None:
            try:
                check_weight_vector(dm.weights, ids, owner=loc)
            except ConfigurationError as exc:
                report.add(loc, str(exc))
        elif dm.deck is not None:
            in_deck = set(dm.deck.criterion_ids)
            missing = set(ids) - in_deck
            extra = in_deck - set(ids)
            if missing:
                report.add(loc, f"deck is missing criteria {sorted(missing)}")
            if extra:
                report.add(loc, f"deck ranks unknown criteria {sorted(extra)}")
        else:
            for cid, (lo, hi) in dm.interval_weights.items():
                if cid not in ids:
                    report.add(loc, f"interval bound for unknown criterion {cid!r}")
                elif not 0.0 <= lo <= hi <= 1.0:
                    report.add(loc, f"interval bound for {cid!r} outside 0 <= lo <= hi <= 1")


def project_file_to_dict(pf: ProjectFile) -> dict:
    """Serialize; parse_project_file inverts this exactly."""
    data: dict[str, Any] = {
        "schema_version": pf.schema_version,
        "criteria": [
            {
                "id": c.id, "group": c.group, "direction": c.direction,
                "scale": None if c.scale is None else list(c.scale),
                "q": c.q, "p": c.p, "v": c.v,
            }
            for c in pf.project.criteria
        ],
        "categories": list(pf.project.scheme.categories),
        "profiles": {
            "base": {cid: list(col) for cid, col in pf.project.scheme.base_profiles.items()},
            "sector_overrides": {
                sector: {cid: list(col) for cid, col in cols.items()}
                for sector, cols in pf.project.scheme.overrides.items()
            },
        },
        "alternatives": [
            {
                "id": a.id, "sector": a.sector,
                "evaluations": {
                    cid: (ev.lo if ev.is_point else [ev.lo, ev.hi])
                    for cid, ev in a.evaluations.items()
                },
            }
            for a in pf.project.alternatives
        ],
        "decision_makers": [
            {
                "id": dm.id,
                **({"weights": dm.weights} if dm.weights is not None else {}),
                **({"deck": deck_to_dict(dm.deck)} if dm.deck is not None else {}),
                **({"interval_weights": {c: list(b) for c, b in dm.interval_weights.items()}}
                   if dm.interval_weights is not None else {}),
            }
            for dm in pf.decision_makers
        ],
        "lambda": [pf.lam.lo, pf.lam.hi],
        "run": {
            "draws": pf.run.draws,
            "seed": pf.run.seed,
            "rule": pf.run.rule,
            "evaluation_sampling": pf.run.evaluation_sampling,
        },
    }
    if pf.risk_cutoff is not None:
        data["risk_cutoff"] = pf.risk_cutoff
    if pf.cash_flows:
        data["cash_flows"] = {label: list(s.flows) for label, s in pf.cash_flows.items()}
    if pf.ratio_samples:
        data["ratio_samples"] = {
            sector: {rid: list(s.observations) for rid, s in ratios.items()}
            for sector, ratios in pf.ratio_samples.items()
        }
    return data


def load_project(path: str | Path, *, validate_data: bool = True) -> ProjectFile:
    """Load and validate a project file.

    Parse errors carry line/column; semantic faults raise
    ProjectValidationError with the full violation report.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} line {exc.lineno} column {exc.colno}", exc.msg) from exc
    return parse_project_file(data, validate_data=validate_data)


def save_project(pf: ProjectFile, path: str | Path) -> None:
    Path(path).write_text(json.dumps(project_file_to_dict(pf), indent=2) + "\n")


# --------------------------------------------------------------------------
# reports

def report_to_dict(report: AcceptabilityReport) -> dict:
    return {
        "categories": list(report.categories),
        "draws": report.draws,
        "seed": report.seed,
        "rule": report.rule,
        "cutoff": report.cutoff,
        "rows": [
            {
                "alternative": r.alternative,
                "dm": r.dm,
                "pi": list(r.pi),
                "se": list(r.se),
                "modal": r.modal,
                "type_i": r.type_i,
                "type_ii": r.type_ii,
            }
            for r in report.rows
        ],
    }


def report_from_dict(data: Mapping) -> AcceptabilityReport:
    rows = tuple(
        AcceptabilityRow(
            alternative=r["alternative"], dm=r["dm"], pi=tuple(r["pi"]), se=tuple(r["se"]),
            modal=r["modal"], type_i=r["type_i"], type_ii=r["type_ii"],
        )
        for r in data["rows"]
    )
    return AcceptabilityReport(
        categories=tuple(data["categories"]), rows=rows, draws=data["draws"],
        seed=data["seed"], rule=data["rule"], cutoff=data["cutoff"],
    )


def merge_reports(reports: Sequence[AcceptabilityReport]) -> AcceptabilityReport:
    """Concatenate rows of runs that share categories and configuration."""
    first = reports[0]
    rows = tuple(row for rep in reports for row in rep.rows)
    return AcceptabilityReport(
        categories=first.categories, rows=rows, draws=first.draws,
        seed=first.seed, rule=first.rule, cutoff=first.cutoff,
    )


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    return repr(float(value))


def write_report(report: AcceptabilityReport, fmt: str, path: str | Path) -> None:
    """Write a report as 'csv' or 'json'.

    CSV columns, in order: alternative, dm, pi_1..pi_p, modal, type_i,
    type_ii, se_1..se_p. Numbers are written with full round-trip precision.
    """
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(report_to_dict(report), indent=2) + "\n")
        return
    if fmt != "csv":
        raise ConfigurationError(f"unknown report format {fmt!r}; expected csv or json")
    p = len(report.categories)
    header = (
        ["alternative", "dm"]
        + [f"pi_{k}" for k in range(1, p + 1)]
        + ["modal", "type_i", "type_ii"]
        + [f"se_{k}" for k in range(1, p + 1)]
    )
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in report.rows:
            writer.writerow(
                [r.alternative, r.dm]
                + [_fmt(x) for x in r.pi]
                + [str(r.modal), _fmt(r.type_i), _fmt(r.type_ii)]
                + [_fmt(x) for x in r.se]
            )


def read_report(path: str | Path) -> AcceptabilityReport:
    """Read back a JSON report (the inverse of write_report(..., 'json', ...))."""
    return report_from_dict(json.loads(Path(path).read_text()))
