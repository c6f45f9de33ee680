"""HTTP service backing the review UI.

Exposes the labeled dataset for browsing/editing, runs detection/analysis
jobs on a background worker, and serves findings plus SARIF export.  Reads
are concurrent; dataset mutations and job execution serialize behind one
lock.  All errors use the envelope {code, message, path}.
"""

from __future__ import annotations

import json
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .dataset import (
    CWE_LABELS,
    Dataset,
    LabelSet,
    MethodRecord,
    bundled_dataset,
    dataset_stats,
    load_dataset,
    merge_records,
    save_dataset,
)
from .javamodel import index_program, load_project, parse_signature
from .ml import load_model, save_model, train_model
from .pipeline import (
    DEFAULT_MODEL_CONFIG,
    PipelineConfig,
    detect_methods,
    finding_to_json,
    merge_detected,
    run_pipeline,
    training_matrix,
)
from .sarif import emit_sarif
from .specgen import generate_specs
from .taint import AnalysisConfig, analyze_program

JOB_KINDS = ("detect", "train", "pipeline", "analyze")

DEFAULT_SETTINGS = {"depth": 2, "matchMode": "exact", "cweFilter": None, "seed": 0}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, path: str = ""):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.path = path


@dataclass
class Job:
    id: str
    kind: str
    status: str = "queued"
    progress: float = 0.0
    result_ref: str | None = None
    error: str | None = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "status": self.status,
            "progress": round(self.progress, 4),
            "resultRef": self.result_ref,
            "error": self.error,
        }


class ServiceState:
    """Mutable state shared by request handlers and the job worker."""

    def __init__(
        self,
        project_root: Path,
        output_dir: Path,
        dataset_path: Path | None,
        model_path: Path | None,
    ):
        self.project_root = Path(project_root)
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.dataset_file = self.output_dir / "dataset.json"
        if not self.dataset_file.exists():
            if dataset_path is not None:
                text = Path(dataset_path).read_text(encoding="utf-8")
                load_dataset(text)  # fail fast on an invalid seed file
                self.dataset_file.write_text(text, encoding="utf-8")
            else:
                self.dataset_file.write_text(save_dataset(bundled_dataset()), encoding="utf-8")
        self.model_path = Path(model_path) if model_path is not None else self.output_dir / "model.json"
        self.settings_file = self.output_dir / "settings.json"
        self.dataset: Dataset = load_dataset(self.dataset_file.read_text(encoding="utf-8"))
        self.scores: dict[str, dict] = {}
        self.findings: list[dict] = []
        self.sarif: str | None = None
        self.lock = threading.Lock()  # single writer: jobs and dataset mutations
        self.jobs_guard = threading.Lock()
        self.jobs: dict[str, Job] = {}
        self.worker = ThreadPoolExecutor(max_workers=1)
        self._restore_artifacts()

    def _restore_artifacts(self) -> None:
        detections = self.output_dir / "detections.json"
        if detections.exists():
            document = json.loads(detections.read_text(encoding="utf-8"))
            self.scores = {row["signature"]: row["scores"] for row in document.get("methods", [])}
        findings = self.output_dir / "findings.json"
        if findings.exists():
            self.findings = json.loads(findings.read_text(encoding="utf-8")).get("findings", [])
        sarif = self.output_dir / "report.sarif"
        if sarif.exists():
            self.sarif = sarif.read_text(encoding="utf-8")

    # -- dataset ----------------------------------------------------------

    def persist_dataset(self) -> None:
        self.dataset_file.write_text(save_dataset(self.dataset), encoding="utf-8")

    def method_row(self, record: MethodRecord) -> dict:
        qualifier, name, _ = parse_signature(record.signature)
        if record.data_out in ("return", "none"):
            data_out = record.data_out
        else:
            data_out = {"parameter": record.data_out}
        return {
            "signature": record.signature,
            "className": qualifier,
            "methodName": name,
            "labels": record.labels.names(),
            "dataIn": list(record.data_in),
            "dataOut": data_out,
            "discovery": record.discovery,
            "note": record.note,
            "scores": self.scores.get(record.signature),
        }

    # -- settings ---------------------------------------------------------

    def settings(self) -> tuple[bool, dict]:
        if not self.settings_file.exists():
            return False, dict(DEFAULT_SETTINGS)
        stored = json.loads(self.settings_file.read_text(encoding="utf-8"))
        merged = dict(DEFAULT_SETTINGS)
        merged.update(stored)
        return True, merged

    def save_settings(self, values: dict) -> dict:
        _, current = self.settings()
        current.update(values)
        self.settings_file.write_text(json.dumps(current, indent=2) + "\n", encoding="utf-8")
        return current

    # -- jobs -------------------------------------------------------------

    def submit_job(self, kind: str, overrides: dict) -> Job:
        with self.jobs_guard:
            active = [j for j in self.jobs.values() if j.status in ("queued", "running")]
            if active:
                raise ApiError(
                    409,
                    "conflict",
                    f"job {active[0].id} ({active[0].kind}) is {active[0].status}",
                    "/kind",
                )
            job = Job(id=uuid.uuid4().hex[:12], kind=kind)
            self.jobs[job.id] = job
        self.worker.submit(self._run_job, job, overrides)
        return job

    def cancel_job(self, job: Job) -> Job:
        with self.jobs_guard:
            if job.status != "queued":
                raise ApiError(409, "conflict", f"cannot cancel a {job.status} job", "/status")
            job.status = "failed"
            job.error = "cancelled"
        return job

    def _run_job(self, job: Job, overrides: dict) -> None:
        with self.jobs_guard:
            if job.status != "queued":
                return  # cancelled before it started
            job.status = "running"
        try:
            with self.lock:
                result_ref = self._execute(job, overrides)
        except Exception as err:  # surface any stage failure on the job record
            with self.jobs_guard:
                job.status = "failed"
                job.error = str(err)
            return
        with self.jobs_guard:
            job.progress = 1.0
            job.status = "done"
            job.result_ref = result_ref

    def _analysis_config(self, overrides: dict) -> tuple[AnalysisConfig, list[str] | None, int]:
        _, settings = self.settings()
        settings.update(overrides)
        cwes = settings.get("cweFilter")
        return (
            AnalysisConfig(
                max_call_depth=int(settings["depth"]), match_mode=settings["matchMode"]
            ),
            None if cwes in (None, []) else list(cwes),
            int(settings.get("seed", 0)),
        )

    def _obtain_model(self, seed: int):
        if self.model_path.exists():
            return load_model(self.model_path)
        model = train_model(training_matrix(self.dataset), DEFAULT_MODEL_CONFIG, seed=seed)
        save_model(model, self.model_path)
        return model

    def _attach_snippets(self, rows: list[dict], program) -> list[dict]:
        for row in rows:
            for step in row["path"]:
                source = program.file_by_uri(step["uri"])
                if source is not None:
                    step["snippet"] = source.line_text(step["line"]).strip()
        return rows

    def _execute(self, job: Job, overrides: dict) -> str:
        analysis, cwes, seed = self._analysis_config(overrides)
        if job.kind == "train":
            job.progress = 0.1
            model = train_model(training_matrix(self.dataset), DEFAULT_MODEL_CONFIG, seed=seed)
            save_model(model, self.model_path)
            return str(self.model_path)
        if job.kind == "detect":
            job.progress = 0.1
            program, _ = index_program(load_project(self.project_root))
            model = self._obtain_model(seed)
            job.progress = 0.5
            rows = detect_methods(program, model)
            self.scores = {row["signature"]: row["scores"] for row in rows}
            detected = [
                MethodRecord(signature=row["signature"], labels=LabelSet.from_names(row["labels"]))
                for row in rows
                if row["labels"]
            ]
            self.dataset = merge_detected(self.dataset, detected)
            self.persist_dataset()
            out = self.output_dir / "detections.json"
            out.write_text(
                json.dumps({"diagnostics": [], "methods": list(rows)}, indent=2) + "\n",
                encoding="utf-8",
            )
            return str(out)
        if job.kind == "analyze":
            job.progress = 0.2
            program, _ = index_program(load_project(self.project_root))
            specs, _ = generate_specs(self.dataset, cwes=cwes)
            job.progress = 0.5
            findings = analyze_program(program, specs, config=analysis)
            rows = self._attach_snippets([finding_to_json(f) for f in findings], program)
            self.findings = rows
            self.sarif = emit_sarif(findings)
            (self.output_dir / "findings.json").write_text(
                json.dumps({"findings": rows}, indent=2) + "\n", encoding="utf-8"
            )
            sarif_path = self.output_dir / "report.sarif"
            sarif_path.write_text(self.sarif, encoding="utf-8")
            return str(sarif_path)
        # pipeline
        cfg = PipelineConfig(
            project_root=self.project_root,
            output_dir=self.output_dir,
            dataset_path=self.dataset_file,
            model_path=self.model_path,
            cwe_filter=None if cwes is None else tuple(cwes),
            analysis=analysis,
            seed=seed,
        )

        def hook(stage: str, fraction: float) -> None:
            job.progress = fraction

        result = run_pipeline(cfg, progress=hook)
        self.dataset = result.dataset
        self.persist_dataset()
        self.scores = {row["signature"]: row["scores"] for row in result.detections}
        program, _ = index_program(load_project(self.project_root))
        self.findings = self._attach_snippets(
            [finding_to_json(f) for f in result.findings], program
        )
        self.sarif = result.sarif_path.read_text(encoding="utf-8")
        return str(result.sarif_path)


def _error_response(status: int, code: str, message: str, path: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message, "path": path})


def create_app(
    project_root: Path,
    output_dir: Path,
    dataset_path: Path | None = None,
    model_path: Path | None = None,
    frontend_dir: Path | None = None,
) -> FastAPI:
    state = ServiceState(project_root, output_dir, dataset_path, model_path)
    app = FastAPI(title="srm-forge", version="0.1.0")
    app.state.service = state

    @app.exception_handler(ApiError)
    async def api_error_handler(_request: Request, err: ApiError):
        return _error_response(err.status, err.code, err.message, err.path)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, err: RequestValidationError):
        first = err.errors()[0] if err.errors() else {"msg": "invalid request", "loc": ()}
        loc = [str(part) for part in first.get("loc", ()) if part != "body"]
        return _error_response(422, "validation", str(first.get("msg")), "/" + "/".join(loc))

    @app.get("/api/methods")
    def list_methods(
        label: str | None = None,
        class_: str | None = Query(None, alias="class"),
        discovery: str | None = None,
    ):
        rows = []
        for record in state.dataset.records:
            if label is not None and label not in record.labels.names():
                continue
            if discovery is not None and record.discovery != discovery:
                continue
            row = state.method_row(record)
            if class_ is not None and row["className"] != class_:
                continue
            rows.append(row)
        return {"methods": rows}

    @app.get("/api/methods/{signature:path}")
    def get_method(signature: str):
        record = state.dataset.by_signature(signature)
        if record is None:
            raise ApiError(404, "not_found", f"no record for {signature!r}", "/signature")
        return state.method_row(record)

    @app.patch("/api/methods/{signature:path}")
    def patch_method(signature: str, body: dict):
        with state.lock:
            record = state.dataset.by_signature(signature)
            try:
                qualifier, _, params = parse_signature(signature)
            except ValueError as err:
                raise ApiError(422, "validation", str(err), "/signature") from None
            labels = record.labels if record is not None else LabelSet.from_names([])
            data_in = record.data_in if record is not None else ()
            data_out = record.data_out if record is not None else "none"
            note = record.note if record is not None else None
            if "labels" in body:
                try:
                    labels = LabelSet.from_names(body["labels"])
                except (ValueError, TypeError) as err:
                    raise ApiError(422, "validation", str(err), "/labels") from None
            if "dataIn" in body:
                raw = body["dataIn"]
                if not isinstance(raw, list) or any(
                    not isinstance(i, int) or isinstance(i, bool) for i in raw
                ):
                    raise ApiError(422, "validation", "dataIn must be a list of parameter indices", "/dataIn")
                bad = [i for i in raw if i < 0 or i >= len(params)]
                if bad:
                    raise ApiError(
                        422,
                        "validation",
                        f"parameter index {bad[0]} out of range for {len(params)} parameter(s)",
                        "/dataIn",
                    )
                data_in = tuple(sorted(set(raw)))
            if "dataOut" in body:
                raw = body["dataOut"]
                if raw in ("return", "none"):
                    data_out = raw
                elif isinstance(raw, dict) and isinstance(raw.get("parameter"), int):
                    index = raw["parameter"]
                    if index < 0 or index >= len(params):
                        raise ApiError(
                            422,
                            "validation",
                            f"parameter index {index} out of range for {len(params)} parameter(s)",
                            "/dataOut",
                        )
                    data_out = index
                else:
                    raise ApiError(
                        422,
                        "validation",
                        'dataOut must be "return", "none", or {"parameter": i}',
                        "/dataOut",
                    )
            if "note" in body:
                raw = body["note"]
                if raw is not None and not isinstance(raw, str):
                    raise ApiError(422, "validation", "note must be text or null", "/note")
                note = raw
            edited = MethodRecord(
                signature=signature,
                labels=labels,
                data_in=data_in,
                data_out=data_out,
                note=note,
            )
            state.dataset = merge_records(state.dataset, [edited])
            state.persist_dataset()
            return state.method_row(state.dataset.by_signature(signature))

    @app.post("/api/jobs", status_code=201)
    def create_job(body: dict):
        kind = body.get("kind")
        if kind not in JOB_KINDS:
            raise ApiError(
                422, "validation", f"kind must be one of {', '.join(JOB_KINDS)}", "/kind"
            )
        overrides = body.get("config") or {}
        if not isinstance(overrides, dict):
            raise ApiError(422, "validation", "config must be an object", "/config")
        job = state.submit_job(kind, overrides)
        return job.to_json()

    @app.get("/api/jobs")
    def list_jobs():
        return {"jobs": [job.to_json() for job in state.jobs.values()]}

    @app.get("/api/jobs/{job_id}")
    def get_job(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise ApiError(404, "not_found", f"no job {job_id!r}", "/id")
        return job.to_json()

    @app.post("/api/jobs/{job_id}/cancel")
    def cancel_job(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise ApiError(404, "not_found", f"no job {job_id!r}", "/id")
        return state.cancel_job(job).to_json()

    @app.get("/api/findings")
    def get_findings():
        return {"findings": state.findings}

    @app.get("/api/export/sarif")
    def export_sarif():
        if state.sarif is None:
            raise ApiError(404, "not_found", "no analysis has produced a report yet", "/")
        return Response(content=state.sarif, media_type="application/sarif+json")

    @app.get("/api/settings")
    def get_settings():
        exists, values = state.settings()
        return {"exists": exists, "settings": values}

    @app.put("/api/settings")
    def put_settings(body: dict):
        unknown = sorted(set(body) - set(DEFAULT_SETTINGS))
        if unknown:
            raise ApiError(422, "validation", f"unknown setting {unknown[0]!r}", f"/{unknown[0]}")
        if "depth" in body and (not isinstance(body["depth"], int) or body["depth"] < 0):
            raise ApiError(422, "validation", "depth must be a non-negative integer", "/depth")
        if "matchMode" in body and body["matchMode"] not in ("exact", "name_and_arity"):
            raise ApiError(422, "validation", "matchMode must be exact or name_and_arity", "/matchMode")
        if "cweFilter" in body and body["cweFilter"] is not None:
            raw = body["cweFilter"]
            if not isinstance(raw, list) or any(label not in CWE_LABELS for label in raw):
                raise ApiError(422, "validation", "cweFilter must be a list of CWE labels", "/cweFilter")
        if "seed" in body and (not isinstance(body["seed"], int) or isinstance(body["seed"], bool)):
            raise ApiError(422, "validation", "seed must be an integer", "/seed")
        with state.lock:
            values = state.save_settings(body)
        return {"exists": True, "settings": values}

    @app.get("/api/stats")
    def get_stats():
        return dataset_stats(state.dataset)

    if frontend_dir is not None and Path(frontend_dir).exists():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
