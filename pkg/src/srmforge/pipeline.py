"""One-call workflow: parse a project, detect SRMs, generate specs, analyze, report.

run_pipeline chains every stage that users would otherwise perform by hand —
export the labeled dataset, derive taint specs, configure the analysis, run
it, and emit SARIF — and drops one artifact per stage into the output
directory.  With fixed inputs and a fixed seed the byte content of every
artifact is identical across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

from . import __version__
from .dataset import (
    TAXONOMY,
    Dataset,
    LabelSet,
    MethodRecord,
    bundled_dataset,
    load_dataset,
    save_dataset,
)
from .features import (
    default_schema,
    default_token_table,
    extract_features,
    features_from_signature,
)
from .javamodel import index_program, load_project
from .ml import (
    BaseLearner,
    ModelConfig,
    MultiLabelModel,
    TrainingMatrix,
    load_model,
    predict_batch,
    save_model,
    train_model,
)
from .sarif import emit_sarif
from .specgen import TaintSpec, generate_specs, specs_to_json
from .taint import AnalysisConfig, Finding, analyze_program

STAGES = ("parse", "features", "predict", "merge", "specs", "analyze", "sarif")

#: Artifact file names, one per workflow task the pipeline consolidates.
ARTIFACT_NAMES = (
    "config.json",
    "detections.json",
    "dataset.json",
    "specs.json",
    "findings.json",
    "report.sarif",
)

DEFAULT_MODEL_CONFIG = ModelConfig(
    kind="ensemble_pruned_sets", base=BaseLearner(kind="logistic_regression")
)


class StageFailure(Exception):
    """A pipeline stage aborted; earlier artifacts stay behind as .partial files."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class PipelineConfig:
    project_root: Path
    output_dir: Path
    dataset_path: Path | None = None
    model_path: Path | None = None
    cwe_filter: tuple[str, ...] | None = None
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    seed: int = 0
    model_config: ModelConfig = DEFAULT_MODEL_CONFIG

    def to_json(self) -> dict:
        return {
            "project_root": str(self.project_root),
            "output_dir": str(self.output_dir),
            "dataset_path": None if self.dataset_path is None else str(self.dataset_path),
            "model_path": None if self.model_path is None else str(self.model_path),
            "cwe_filter": None if self.cwe_filter is None else list(self.cwe_filter),
            "analysis": {
                "max_call_depth": self.analysis.max_call_depth,
                "match_mode": self.analysis.match_mode,
            },
            "seed": self.seed,
            "model_config": self.model_config.to_json(),
            "tool_version": __version__,
        }


@dataclass(frozen=True)
class PipelineResult:
    dataset: Dataset
    specs: tuple[TaintSpec, ...]
    findings: tuple[Finding, ...]
    sarif_path: Path
    artifacts: dict[str, Path]
    detections: tuple[dict, ...]


ProgressHook = Callable[[str, float], None]


class _ArtifactStore:
    """Writes artifacts as `.partial` files, renamed to final names on success."""

    def __init__(self, output_dir: Path):
        self.output_dir = output_dir
        self.written: dict[str, Path] = {}

    def write(self, name: str, text: str) -> None:
        partial = self.output_dir / f"{name}.partial"
        partial.write_text(text, encoding="utf-8")
        self.written[name] = partial

    def promote(self) -> dict[str, Path]:
        final: dict[str, Path] = {}
        for name, partial in self.written.items():
            target = self.output_dir / name
            partial.replace(target)
            final[name] = target
        return final


def _base_dataset(cfg: PipelineConfig) -> Dataset:
    if cfg.dataset_path is None:
        return bundled_dataset()
    return load_dataset(Path(cfg.dataset_path).read_text(encoding="utf-8"))


def training_matrix(dataset: Dataset) -> TrainingMatrix:
    """Signature-derived feature matrix for every record in the dataset."""
    schema = default_schema()
    tokens = default_token_table()
    pairs = [
        (features_from_signature(r.signature, schema, tokens), r.labels)
        for r in dataset.records
    ]
    return TrainingMatrix.from_pairs(pairs, schema)


def _obtain_model(
    cfg: PipelineConfig, base: Dataset, store: _ArtifactStore
) -> MultiLabelModel:
    if cfg.model_path is not None and Path(cfg.model_path).exists():
        return load_model(cfg.model_path)
    model = train_model(training_matrix(base), cfg.model_config, seed=cfg.seed)
    if cfg.model_path is not None:
        save_model(model, cfg.model_path)
    return model


def _project_vectors(program) -> tuple[list[str], list]:
    """Sorted signatures and their feature vectors for every project method."""
    schema = default_schema()
    tokens = default_token_table()
    methods = sorted(program.method_index.items())
    signatures = [signature for signature, _ in methods]
    vectors = [extract_features(m, program, schema, tokens) for _, m in methods]
    return signatures, vectors


def _prediction_rows(
    model: MultiLabelModel, signatures: list[str], vectors: list
) -> tuple[dict, ...]:
    if vectors and model.schema_version != vectors[0].schema_version:
        raise ValueError(
            f"model schema {model.schema_version!r} != feature schema "
            f"{vectors[0].schema_version!r}"
        )
    predictions = predict_batch(model, vectors)
    return tuple(
        {
            "signature": signature,
            "labels": labels.names(),
            "scores": {
                name: round(score, 6) for name, score in zip(TAXONOMY, scores)
            },
        }
        for signature, (labels, scores) in zip(signatures, predictions)
    )


def detect_methods(program, model: MultiLabelModel) -> tuple[dict, ...]:
    """Prediction rows (signature, labels, scores) for every project method."""
    signatures, vectors = _project_vectors(program)
    return _prediction_rows(model, signatures, vectors)


def merge_detected(base: Dataset, detected: list[MethodRecord]) -> Dataset:
    """Add predicted records; curated or manually reviewed labels always win."""
    merged = {r.signature: r for r in base.records}
    order = [r.signature for r in base.records]
    for record in detected:
        stamped = replace(record, discovery="detected")
        existing = merged.get(stamped.signature)
        if existing is not None and existing.discovery != "detected":
            continue
        if existing is None:
            order.append(stamped.signature)
        merged[stamped.signature] = stamped
    return replace(base, records=tuple(merged[sig] for sig in order))


def finding_to_json(finding: Finding) -> dict:
    return {
        "specId": finding.spec_id,
        "cwe": finding.cwe,
        "message": finding.message,
        "source": {"uri": finding.source_location[0], "line": finding.source_location[1]},
        "sink": {"uri": finding.sink_location[0], "line": finding.sink_location[1]},
        "path": [
            {"uri": step.uri, "line": step.line, "description": step.description}
            for step in finding.path
        ],
    }


def _dump(document: dict) -> str:
    return json.dumps(document, indent=2) + "\n"


def run_pipeline(cfg: PipelineConfig, progress: ProgressHook | None = None) -> PipelineResult:
    """Run every stage; see module docstring for the artifact contract."""
    output_dir = Path(cfg.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    store = _ArtifactStore(output_dir)
    total = len(STAGES)

    def enter(stage: str) -> None:
        if progress is not None:
            progress(stage, STAGES.index(stage) / total)

    def fail(stage: str, exc: Exception) -> StageFailure:
        return StageFailure(stage, exc)

    store.write("config.json", _dump(cfg.to_json()))

    enter("parse")
    try:
        program, diagnostics = index_program(load_project(cfg.project_root))
    except Exception as exc:
        raise fail("parse", exc) from exc

    enter("features")
    try:
        signatures, vectors = _project_vectors(program)
    except Exception as exc:
        raise fail("features", exc) from exc

    enter("predict")
    try:
        base = _base_dataset(cfg)
        model = _obtain_model(cfg, base, store)
        detections = _prediction_rows(model, signatures, vectors)
        store.write(
            "detections.json",
            _dump(
                {
                    "diagnostics": [str(d) for d in diagnostics],
                    "methods": list(detections),
                }
            ),
        )
    except Exception as exc:
        raise fail("predict", exc) from exc

    enter("merge")
    try:
        detected_records = [
            MethodRecord(
                signature=row["signature"],
                labels=LabelSet.from_names(row["labels"]),
                discovery="detected",
            )
            for row in detections
            if row["labels"]
        ]
        snapshot = merge_detected(base, detected_records)
        store.write("dataset.json", save_dataset(snapshot))
    except Exception as exc:
        raise fail("merge", exc) from exc

    enter("specs")
    try:
        cwes = None if cfg.cwe_filter is None else list(cfg.cwe_filter)
        specs, spec_notes = generate_specs(snapshot, cwes=cwes)
        document = specs_to_json(specs)
        document["notes"] = spec_notes
        store.write("specs.json", _dump(document))
    except Exception as exc:
        raise fail("specs", exc) from exc

    enter("analyze")
    try:
        findings = analyze_program(program, specs, config=cfg.analysis)
        store.write(
            "findings.json",
            _dump({"findings": [finding_to_json(f) for f in findings]}),
        )
    except Exception as exc:
        raise fail("analyze", exc) from exc

    enter("sarif")
    try:
        store.write("report.sarif", emit_sarif(findings, tool_version=__version__))
    except Exception as exc:
        raise fail("sarif", exc) from exc

    artifacts = store.promote()
    if progress is not None:
        progress("done", 1.0)
    return PipelineResult(
        dataset=snapshot,
        specs=tuple(specs),
        findings=tuple(findings),
        sarif_path=artifacts["report.sarif"],
        artifacts=artifacts,
        detections=detections,
    )
