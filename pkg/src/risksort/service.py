"""HTTP front end: project store, asynchronous runs, synchronous what-ifs.

Runs execute on background threads and are polled through handles; what-if
requests are synchronous with a capped draw count so the UI stays
responsive. The project store is guarded by a lock; what-if overlays work
on copies and never touch stored projects.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware

from .model import ConfigurationError, Evaluation, LambdaSpec
from .project_io import (
    GROUP_DM,
    ProjectFile,
    ProjectValidationError,
    SchemaError,
    parse_deck,
    parse_project_file,
    project_file_to_dict,
    report_to_dict,
)
from .simos import preorder_check, simos_resolve
from .smaa import RunConfig, WeightSampler, run_smaa
from .whatif import DEFAULT_WHATIF_DRAWS, WhatIfOverlay, run_whatif

RUN_QUEUED = "queued"
RUN_RUNNING = "running"
RUN_DONE = "done"
RUN_FAILED = "failed"


@dataclass
class RunHandle:
    run_id: str
    project_id: str
    status: str = RUN_QUEUED
    report: Optional[dict] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        out = {"run_id": self.run_id, "project_id": self.project_id, "status": self.status}
        if self.status == RUN_DONE:
            out["report"] = self.report
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class _Store:
    projects: dict[str, ProjectFile] = field(default_factory=dict)
    documents: dict[str, dict] = field(default_factory=dict)
    runs: dict[str, RunHandle] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def active_runs(self, project_id: str) -> list[RunHandle]:
        return [
            h for h in self.runs.values()
            if h.project_id == project_id and h.status in (RUN_QUEUED, RUN_RUNNING)
        ]


def _bad_request(exc: Exception) -> HTTPException:
    if isinstance(exc, ProjectValidationError):
        detail = {"error": "validation", "violations": [
            {"location": v.location, "message": v.message} for v in exc.report.violations
        ]}
    elif isinstance(exc, SchemaError):
        detail = {"error": "schema", "location": exc.location, "message": str(exc)}
    else:
        detail = {"error": "configuration", "message": str(exc)}
    return HTTPException(status_code=400, detail=detail)


def _parse_overlay(body: dict) -> WhatIfOverlay:
    allowed = {"dm", "veto", "evaluations", "lambda", "rule", "draws", "seed",
               "evaluation_sampling"}
    unknown = set(body) - allowed
    if unknown:
        raise SchemaError("whatif", f"unknown fields {sorted(unknown)}")
    evaluations = {
        alt: {cid: _parse_eval_patch(v) for cid, v in patch.items()}
        for alt, patch in (body.get("evaluations") or {}).items()
    }
    lam = body.get("lambda")
    return WhatIfOverlay(
        dm=body.get("dm"),
        veto={cid: float(v) for cid, v in (body.get("veto") or {}).items()},
        evaluations=evaluations,
        lam=None if lam is None else LambdaSpec(float(lam[0]), float(lam[1])),
        rule=body.get("rule"),
        draws=int(body.get("draws", DEFAULT_WHATIF_DRAWS)),
        seed=body.get("seed"),
        evaluation_sampling=body.get("evaluation_sampling"),
    )


def _parse_eval_patch(value: Any) -> Evaluation:
    if isinstance(value, (list, tuple)):
        return Evaluation.interval(float(value[0]), float(value[1]))
    return Evaluation.point(float(value))


def _run_request_config(pf: ProjectFile, body: dict) -> tuple[WeightSampler, str, RunConfig, int]:
    allowed = {"dm", "draws", "seed", "lambda", "rule", "evaluation_sampling", "workers"}
    unknown = set(body) - allowed
    if unknown:
        raise SchemaError("run", f"unknown fields {sorted(unknown)}")
    dm = body.get("dm")
    if dm is None or dm == GROUP_DM:
        if pf.decision_makers:
            sampler, label = WeightSampler.intervals(pf.group_bounds()), GROUP_DM
        else:
            sampler, label = WeightSampler.simplex_uniform(), "uniform"
    else:
        try:
            sampler, label = pf.decision_maker(dm).sampler(), dm
        except KeyError:
            raise ConfigurationError(f"unknown decision maker {dm!r}")
    lam = body.get("lambda")
    config = RunConfig(
        draws=int(body.get("draws", pf.run.draws)),
        seed=int(body.get("seed", pf.run.seed)),
        lam=pf.lam if lam is None else LambdaSpec(float(lam[0]), float(lam[1])),
        rule=body.get("rule", pf.run.rule),
        evaluation_sampling=bool(body.get("evaluation_sampling", pf.run.evaluation_sampling)),
    )
    return sampler, label, config, int(body.get("workers", 1))


def create_app(*, run_in_background: bool = True,
               project_dir: Optional[str] = None) -> FastAPI:
    """Build the service; run_in_background=False executes runs inline,
    which keeps smoke tests free of polling loops. When project_dir is set,
    stored projects and finished run reports are written through to it."""
    app = FastAPI(title="risksort", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    store = _Store()
    app.state.store = store
    out_dir = None
    if project_dir is not None:
        out_dir = Path(project_dir)
        (out_dir / "runs").mkdir(parents=True, exist_ok=True)

    def _write_through(relative: str, payload: dict) -> None:
        if out_dir is not None:
            (out_dir / relative).write_text(json.dumps(payload, indent=2) + "\n")

    @app.post("/projects")
    def create_project(body: dict, id: Optional[str] = None):
        try:
            pf = parse_project_file(body)
        except (SchemaError, ProjectValidationError, ConfigurationError) as exc:
            raise _bad_request(exc)
        project_id = id or uuid.uuid4().hex[:12]
        with store.lock:
            if project_id in store.projects and store.active_runs(project_id):
                raise HTTPException(
                    status_code=409,
                    detail={"error": "conflict",
                            "message": f"project {project_id!r} has active runs"},
                )
            store.projects[project_id] = pf
            store.documents[project_id] = project_file_to_dict(pf)
        _write_through(f"{project_id}.json", store.documents[project_id])
        return {"project_id": project_id}

    def _project(project_id: str) -> ProjectFile:
        with store.lock:
            pf = store.projects.get(project_id)
        if pf is None:
            raise HTTPException(status_code=404,
                                detail={"error": "not_found", "message": project_id})
        return pf

    @app.get("/projects/{project_id}")
    def get_project(project_id: str):
        _project(project_id)
        with store.lock:
            return store.documents[project_id]

    @app.post("/projects/{project_id}/runs")
    def start_run(project_id: str, body: dict):
        pf = _project(project_id)
        try:
            sampler, label, config, workers = _run_request_config(pf, body or {})
            sampler.prepare(pf.project.criterion_ids)
        except (SchemaError, ProjectValidationError, ConfigurationError) as exc:
            raise _bad_request(exc)
        handle = RunHandle(run_id=uuid.uuid4().hex[:12], project_id=project_id)
        with store.lock:
            store.runs[handle.run_id] = handle

        def execute():
            handle.status = RUN_RUNNING
            try:
                report = run_smaa(pf.project, sampler, config, workers=workers,
                                  cutoff=pf.risk_cutoff, dm_label=label)
                handle.report = report_to_dict(report)
                handle.status = RUN_DONE
                _write_through(f"runs/{handle.run_id}.json", handle.to_dict())
            except Exception as exc:  # surfaced through the handle, not the log
                handle.error = str(exc)
                handle.status = RUN_FAILED

        if run_in_background:
            threading.Thread(target=execute, daemon=True).start()
        else:
            execute()
        return handle.to_dict()

    @app.get("/runs/{run_id}")
    def get_run(run_id: str):
        with store.lock:
            handle = store.runs.get(run_id)
        if handle is None:
            raise HTTPException(status_code=404,
                                detail={"error": "not_found", "message": run_id})
        return handle.to_dict()

    @app.post("/projects/{project_id}/whatif")
    def whatif(project_id: str, body: dict):
        pf = _project(project_id)
        try:
            overlay = _parse_overlay(body or {})
            result = run_whatif(pf, overlay)
        except (SchemaError, ProjectValidationError, ConfigurationError) as exc:
            raise _bad_request(exc)
        return {
            "report": report_to_dict(result.report),
            "knockouts": list(result.knockouts),
            "diagnostics": [
                {
                    "alternative": d.alternative,
                    "intervals": [list(iv) for iv in d.intervals],
                    "non_monotone": d.non_monotone,
                    "skips_categories": d.skips_categories,
                    "fragile": d.fragile,
                    "knocked_out": d.knocked_out,
                    "effective_pi": list(d.effective_pi),
                    "effective_modal": d.effective_modal,
                }
                for d in result.diagnostics
            ],
        }

    @app.post("/weights/simos")
    def simos_weights(body: dict):
        try:
            deck = parse_deck(body, "deck")
            result = simos_resolve(deck)
        except (SchemaError, ConfigurationError, ValueError) as exc:
            raise _bad_request(exc if isinstance(exc, (SchemaError, ConfigurationError))
                               else SchemaError("deck", str(exc)))
        return {
            "rank_weights": list(result.rank_weights),
            "rank_totals": list(result.rank_totals()),
            "total": result.total,
            "weights": result.weights,
            "preorder": preorder_check(deck).chain(),
        }

    return app


def serve(host: str, port: int, project_dir: Optional[str] = None) -> None:
    import uvicorn

    uvicorn.run(create_app(project_dir=project_dir), host=host, port=port,
                log_level="warning")
