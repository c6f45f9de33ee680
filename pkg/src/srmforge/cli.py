"""srm-forge command line.

Top-level commands cover the end-user workflow (detect, train, specgen,
analyze, pipeline, eval, serve); the `dataset`, `features`, and `ml`
subgroups expose each library layer directly.  Every top-level command
accepts `--config <json-file>` whose keys override the corresponding flags.

Exit codes: 0 on success; 1 when findings are present and --fail-on-findings
was given; 2 on any error.
"""

from __future__ import annotations

import functools
import json
from pathlib import Path

import click

from .arff import emit_arff, read_arff
from .dataset import (
    CWE_LABELS,
    TAXONOMY,
    Dataset,
    FormatError,
    LabelSet,
    bundled_dataset,
    dataset_stats,
    load_dataset,
    save_dataset,
    split_dataset,
    validate_dataset,
)
from .features import (
    FeatureVector,
    default_schema,
    default_token_table,
    extract_features,
    features_from_signature,
)
from .javamodel import index_program, load_project
from .ml import (
    BaseLearner,
    ModelConfig,
    TrainingMatrix,
    cross_validate,
    evaluate_metrics,
    load_model,
    model_search,
    predict_batch,
    save_model,
    train_model,
)
from .pipeline import (
    DEFAULT_MODEL_CONFIG,
    PipelineConfig,
    detect_methods,
    run_pipeline,
    training_matrix,
)
from .sarif import emit_sarif
from .specgen import generate_specs, load_specs_file, save_specs
from .taint import AnalysisConfig, analyze_program

_KIND_ALIASES = {"br": "binary_relevance", "ps": "pruned_sets", "eps": "ensemble_pruned_sets"}
_KIND_CHOICES = [*_KIND_ALIASES, *_KIND_ALIASES.values()]


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    raise SystemExit(2)


def _guarded(fn):
    """Map unexpected exceptions to the documented error exit code."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (SystemExit, click.exceptions.Exit, click.UsageError):
            raise
        except Exception as err:
            _fail(str(err))

    return wrapper


def _overlay(values: dict, config_path: str | None) -> dict:
    """Apply --config file entries on top of parsed flag values."""
    if config_path is None:
        return values
    try:
        raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        _fail(f"cannot read --config file: {err}")
    if not isinstance(raw, dict):
        _fail("--config file must hold a JSON object")
    unknown = sorted(set(raw) - set(values))
    if unknown:
        _fail(f"--config keys not recognized: {', '.join(unknown)}")
    merged = dict(values)
    merged.update(raw)
    return merged


def _load_dataset_arg(path: str | None) -> Dataset:
    if path is None:
        return bundled_dataset()
    return load_dataset(Path(path).read_text(encoding="utf-8"))


def _matrix_from_arff(path: str) -> TrainingMatrix:
    document = read_arff(Path(path).read_text(encoding="utf-8"))
    schema = default_schema()
    expected = [*TAXONOMY, *(entry.id for entry in schema.entries)]
    names = [name for name, _ in document.attributes]
    if names != expected:
        _fail(f"ARFF attributes do not match the feature schema ({len(names)} found)")
    pairs = []
    for row in document.rows:
        labels = LabelSet(bits=tuple(bool(int(b)) for b in row[: document.label_count]))
        vector = FeatureVector(
            schema_version=schema.version, values=tuple(row[document.label_count :])
        )
        pairs.append((vector, labels))
    return TrainingMatrix.from_pairs(pairs, schema)


def _input_matrix(dataset: str | None, arff: str | None) -> TrainingMatrix:
    if arff is not None:
        return _matrix_from_arff(arff)
    return training_matrix(_load_dataset_arg(dataset))


def _model_config(kind: str, base: str, p: int, m: int, sample_fraction: float, t: float) -> ModelConfig:
    return ModelConfig(
        kind=_KIND_ALIASES.get(kind, kind),
        base=BaseLearner(kind=base),
        p=p,
        m=m,
        sample_fraction=sample_fraction,
        t=t,
    )


def _model_options(fn):
    for option in reversed(
        [
            click.option("--kind", type=click.Choice(_KIND_CHOICES), default="eps", show_default=True),
            click.option(
                "--base",
                type=click.Choice(["logistic_regression", "decision_tree"]),
                default="logistic_regression",
                show_default=True,
            ),
            click.option("--p", type=int, default=1, show_default=True, help="Pruning threshold."),
            click.option("--m", type=int, default=10, show_default=True, help="Ensemble size."),
            click.option("--sample-fraction", type=float, default=0.63, show_default=True),
            click.option("--t", type=float, default=0.5, show_default=True, help="Vote threshold."),
        ]
    ):
        fn = option(fn)
    return fn


def _cwe_list(values: tuple[str, ...]) -> list[str] | None:
    if not values:
        return None
    labels = [part.strip() for value in values for part in value.split(",") if part.strip()]
    for label in labels:
        if label not in CWE_LABELS:
            _fail(f"unknown CWE label {label!r}; expected one of {', '.join(CWE_LABELS)}")
    return labels


def _write_or_echo(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(out).write_text(text, encoding="utf-8")


@click.group()
@click.version_option(package_name="srmforge", prog_name="srm-forge")
def cli() -> None:
    """Detect security-relevant methods, derive taint specs, analyze, report."""


# --------------------------------------------------------------------------
# end-user workflow commands
# --------------------------------------------------------------------------


@cli.command()
@click.option("--project", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False), help="Training dataset (default: bundled corpus).")
@click.option("--model", type=click.Path(dir_okay=False), help="Model file; trained and saved here when missing.")
@click.option("--out", type=click.Path(dir_okay=False), help="Write detections JSON here (default: stdout).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@_guarded
def detect(project, dataset, model, out, seed, config_path) -> None:
    """Predict label sets for every method of a Java project."""
    opts = _overlay(
        {"project": project, "dataset": dataset, "model": model, "out": out, "seed": seed},
        config_path,
    )
    program, diagnostics = index_program(load_project(opts["project"]))
    base = _load_dataset_arg(opts["dataset"])
    model_path = opts["model"]
    if model_path is not None and Path(model_path).exists():
        trained = load_model(model_path)
    else:
        trained = train_model(training_matrix(base), DEFAULT_MODEL_CONFIG, seed=opts["seed"])
        if model_path is not None:
            save_model(trained, model_path)
    rows = detect_methods(program, trained)
    document = {"diagnostics": [str(d) for d in diagnostics], "methods": list(rows)}
    _write_or_echo(json.dumps(document, indent=2) + "\n", opts["out"])
    flagged = sum(1 for row in rows if row["labels"])
    click.echo(f"{flagged} of {len(rows)} methods flagged", err=True)


@cli.command()
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--arff", type=click.Path(exists=True, dir_okay=False))
@_model_options
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@_guarded
def train(dataset, arff, kind, base, p, m, sample_fraction, t, seed, out, config_path) -> None:
    """Train a multi-label model and save it as versioned JSON."""
    opts = _overlay(
        {
            "dataset": dataset,
            "arff": arff,
            "kind": kind,
            "base": base,
            "p": p,
            "m": m,
            "sample_fraction": sample_fraction,
            "t": t,
            "seed": seed,
            "out": out,
        },
        config_path,
    )
    matrix = _input_matrix(opts["dataset"], opts["arff"])
    config = _model_config(opts["kind"], opts["base"], opts["p"], opts["m"], opts["sample_fraction"], opts["t"])
    model = train_model(matrix, config, seed=opts["seed"])
    save_model(model, opts["out"])
    for note in model.diagnostics:
        click.echo(f"note: {note}", err=True)
    click.echo(f"trained {config.config_id} on {len(matrix)} rows -> {opts['out']}")


@cli.command()
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False), help="Default: bundled corpus.")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--cwe", multiple=True, help="Restrict to these CWE labels (repeatable or comma-separated).")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@_guarded
def specgen(dataset, out, cwe, config_path) -> None:
    """Generate taint specs from a labeled dataset."""
    opts = _overlay({"dataset": dataset, "out": out, "cwe": list(cwe)}, config_path)
    specs, notes = generate_specs(
        _load_dataset_arg(opts["dataset"]), cwes=_cwe_list(tuple(opts["cwe"]))
    )
    save_specs(specs, opts["out"])
    for note in notes:
        click.echo(f"note: {note}", err=True)
    click.echo(f"{len(specs)} spec(s) -> {opts['out']}")


@cli.command()
@click.option("--project", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--specs", "specs_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--depth", type=int, default=2, show_default=True, help="Max call depth for summaries.")
@click.option("--match-mode", type=click.Choice(["exact", "name_and_arity"]), default="exact", show_default=True)
@click.option("--out", default="findings.sarif", show_default=True, type=click.Path(dir_okay=False))
@click.option("--fail-on-findings", is_flag=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@_guarded
def analyze(project, specs_path, depth, match_mode, out, fail_on_findings, config_path) -> None:
    """Run the taint analysis against a project with existing specs."""
    opts = _overlay(
        {
            "project": project,
            "specs": specs_path,
            "depth": depth,
            "match_mode": match_mode,
            "out": out,
            "fail_on_findings": fail_on_findings,
        },
        config_path,
    )
    program, diagnostics = index_program(load_project(opts["project"]))
    for diagnostic in diagnostics:
        click.echo(str(diagnostic), err=True)
    specs = load_specs_file(opts["specs"])
    config = AnalysisConfig(max_call_depth=opts["depth"], match_mode=opts["match_mode"])
    findings = analyze_program(program, specs, config=config)
    Path(opts["out"]).write_text(emit_sarif(findings), encoding="utf-8")
    click.echo(f"{len(findings)} finding(s) -> {opts['out']}")
    if findings and opts["fail_on_findings"]:
        raise SystemExit(1)


@cli.command()
@click.option("--project", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False), help="Default: bundled corpus.")
@click.option("--model", type=click.Path(dir_okay=False), help="Model file; trained and saved here when missing.")
@click.option("--cwe", multiple=True, help="Restrict specs to these CWE labels.")
@click.option("--depth", type=int, default=2, show_default=True)
@click.option("--match-mode", type=click.Choice(["exact", "name_and_arity"]), default="exact", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-dir", default="srmforge-out", show_default=True, type=click.Path(file_okay=False))
@click.option("--fail-on-findings", is_flag=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@_guarded
def pipeline(project, dataset, model, cwe, depth, match_mode, seed, out_dir, fail_on_findings, config_path) -> None:
    """Full workflow: detect, merge, specgen, analyze, SARIF — one invocation."""
    opts = _overlay(
        {
            "project": project,
            "dataset": dataset,
            "model": model,
            "cwe": list(cwe),
            "depth": depth,
            "match_mode": match_mode,
            "seed": seed,
            "out_dir": out_dir,
            "fail_on_findings": fail_on_findings,
        },
        config_path,
    )
    cwes = _cwe_list(tuple(opts["cwe"]))
    cfg = PipelineConfig(
        project_root=Path(opts["project"]),
        output_dir=Path(opts["out_dir"]),
        dataset_path=None if opts["dataset"] is None else Path(opts["dataset"]),
        model_path=None if opts["model"] is None else Path(opts["model"]),
        cwe_filter=None if cwes is None else tuple(cwes),
        analysis=AnalysisConfig(max_call_depth=opts["depth"], match_mode=opts["match_mode"]),
        seed=opts["seed"],
    )
    result = run_pipeline(cfg, progress=lambda stage, _: click.echo(f"[{stage}]", err=True))
    for name, path in sorted(result.artifacts.items()):
        click.echo(f"{name}: {path}")
    click.echo(f"{len(result.findings)} finding(s)")
    if result.findings and opts["fail_on_findings"]:
        raise SystemExit(1)


@cli.command("eval")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--arff", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@_guarded
def eval_command(model_path, dataset, arff, config_path) -> None:
    """Score a saved model against labeled data; prints metrics JSON."""
    opts = _overlay({"model": model_path, "dataset": dataset, "arff": arff}, config_path)
    matrix = _input_matrix(opts["dataset"], opts["arff"])
    model = load_model(opts["model"])
    predictions = predict_batch(model, [vector for vector, _ in matrix.rows])
    metrics = evaluate_metrics([labels for labels, _ in predictions], matrix.label_sets())
    click.echo(json.dumps(metrics.to_json(), indent=2))


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--project", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--dataset", type=click.Path(dir_okay=False), help="Dataset file; seeded from the bundled corpus when missing.")
@click.option("--model", type=click.Path(dir_okay=False))
@click.option("--out-dir", default="srmforge-out", show_default=True, type=click.Path(file_okay=False))
@click.option("--frontend", type=click.Path(file_okay=False), help="Directory of built UI assets to serve at /.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@_guarded
def serve(host, port, project, dataset, model, out_dir, frontend, config_path) -> None:
    """Serve the HTTP API (and, if built, the review UI)."""
    import uvicorn

    from .service import create_app

    opts = _overlay(
        {
            "host": host,
            "port": port,
            "project": project,
            "dataset": dataset,
            "model": model,
            "out_dir": out_dir,
            "frontend": frontend,
        },
        config_path,
    )
    app = create_app(
        project_root=Path(opts["project"]),
        output_dir=Path(opts["out_dir"]),
        dataset_path=None if opts["dataset"] is None else Path(opts["dataset"]),
        model_path=None if opts["model"] is None else Path(opts["model"]),
        frontend_dir=None if opts["frontend"] is None else Path(opts["frontend"]),
    )
    uvicorn.run(app, host=opts["host"], port=opts["port"])


# --------------------------------------------------------------------------
# dataset subcommands
# --------------------------------------------------------------------------


@cli.group()
def dataset() -> None:
    """Inspect and manipulate labeled method datasets."""


@dataset.command("validate")
@click.option("--dataset", "dataset_path", type=click.Path(exists=True, dir_okay=False))
@_guarded
def dataset_validate(dataset_path) -> None:
    """Schema-check a dataset file and print quality warnings."""
    try:
        loaded = _load_dataset_arg(dataset_path)
    except FormatError as err:
        _fail(str(err))
    for warning in validate_dataset(loaded):
        click.echo(warning, err=True)
    click.echo(f"OK ({len(loaded.records)} records)")


@dataset.command("stats")
@click.option("--dataset", "dataset_path", type=click.Path(exists=True, dir_okay=False))
@_guarded
def dataset_stats_command(dataset_path) -> None:
    """Print label counts, co-occurrence, and label-set histogram as JSON."""
    click.echo(json.dumps(dataset_stats(_load_dataset_arg(dataset_path)), indent=2))


@dataset.command("split")
@click.option("--dataset", "dataset_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--train-fraction", type=float, default=0.7, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-train", required=True, type=click.Path(dir_okay=False))
@click.option("--out-test", required=True, type=click.Path(dir_okay=False))
@_guarded
def dataset_split(dataset_path, train_fraction, seed, out_train, out_test) -> None:
    """Seeded train/test partition written as two dataset files."""
    train_part, test_part = split_dataset(_load_dataset_arg(dataset_path), train_fraction, seed)
    Path(out_train).write_text(save_dataset(train_part), encoding="utf-8")
    Path(out_test).write_text(save_dataset(test_part), encoding="utf-8")
    click.echo(f"{len(train_part.records)} train / {len(test_part.records)} test")


# --------------------------------------------------------------------------
# feature subcommands
# --------------------------------------------------------------------------


@cli.group()
def features() -> None:
    """Feature extraction for Java projects."""


@features.command("extract")
@click.option("--project", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False), help="Labels for known signatures (default: bundled corpus).")
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@_guarded
def features_extract(project, dataset, out) -> None:
    """Extract one feature row per project method into an ARFF file."""
    program, diagnostics = index_program(load_project(project))
    for diagnostic in diagnostics:
        click.echo(str(diagnostic), err=True)
    labels_by_signature = {r.signature: r.labels for r in _load_dataset_arg(dataset).records}
    schema = default_schema()
    tokens = default_token_table()
    records = [
        (
            extract_features(method, program, schema, tokens),
            labels_by_signature.get(signature, LabelSet.from_names([])),
        )
        for signature, method in sorted(program.method_index.items())
    ]
    Path(out).write_text(emit_arff(records, schema), encoding="utf-8")
    click.echo(f"{len(records)} rows -> {out}")


# --------------------------------------------------------------------------
# ml subcommands
# --------------------------------------------------------------------------


@cli.group()
def ml() -> None:
    """Multi-label learning: train, predict, evaluate, cross-validate, search."""


ml.add_command(train, "train")
ml.add_command(eval_command, "eval")


@ml.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--arff", type=click.Path(exists=True, dir_okay=False))
@click.option("--signature", multiple=True, help="Predict for canonical signatures (repeatable).")
@_guarded
def ml_predict(model_path, arff, signature) -> None:
    """Predict label sets for feature rows or bare signatures."""
    if (arff is None) == (not signature):
        _fail("provide exactly one of --arff or --signature")
    model = load_model(model_path)
    if arff is not None:
        names = None
        vectors = [vector for vector, _ in _matrix_from_arff(arff).rows]
    else:
        names = list(signature)
        schema = default_schema()
        tokens = default_token_table()
        vectors = [features_from_signature(s, schema, tokens) for s in names]
    rows = []
    for i, (labels, scores) in enumerate(predict_batch(model, vectors)):
        row = {
            "labels": labels.names(),
            "scores": {name: round(score, 6) for name, score in zip(TAXONOMY, scores)},
        }
        if names is not None:
            row = {"signature": names[i], **row}
        rows.append(row)
    click.echo(json.dumps(rows, indent=2))


@ml.command("cv")
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--arff", type=click.Path(exists=True, dir_okay=False))
@_model_options
@click.option("--protocol", type=click.Choice(["kfold", "holdout"]), default="kfold", show_default=True)
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_guarded
def ml_cv(dataset, arff, kind, base, p, m, sample_fraction, t, protocol, k, seed) -> None:
    """Cross-validate a model configuration; prints the per-fold report."""
    matrix = _input_matrix(dataset, arff)
    config = _model_config(kind, base, p, m, sample_fraction, t)
    report = cross_validate(matrix, config, k, seed=seed, protocol=protocol)
    click.echo(json.dumps(report.to_json(), indent=2))


@ml.command("search")
@click.option("--dataset", type=click.Path(exists=True, dir_okay=False))
@click.option("--arff", type=click.Path(exists=True, dir_okay=False))
@click.option("--budget", type=int, default=16, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_guarded
def ml_search(dataset, arff, budget, seed) -> None:
    """Evaluate a seeded sample of the model grid; prints the leaderboard."""
    matrix = _input_matrix(dataset, arff)
    best, leaderboard = model_search(matrix, budget, seed=seed)
    click.echo(
        json.dumps(
            {
                "best": best.config_id,
                "leaderboard": [
                    {"config": config.config_id, "macro_f1": score}
                    for config, score in leaderboard
                ],
            },
            indent=2,
        )
    )


main = cli
