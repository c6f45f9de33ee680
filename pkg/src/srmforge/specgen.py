"""Turn labeled method records into executable taint-flow specifications.

Each specification binds one CWE to the source/sink/sanitizer patterns drawn
from the records carrying that CWE label. General-purpose sources and sinks
(role label with no CWE bits) back-fill CWEs that lack their own, so a lone
CWE-specific sink still yields a runnable spec.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .dataset import CWE_LABELS, Dataset, FormatError, MethodRecord
from .javamodel import parse_signature

PATTERN_MODES = ("exact", "name_and_arity")
SPEC_FORMAT_VERSION = "1"


def cwe_display(label: str) -> str:
    """``cwe89`` -> ``CWE-89``; the conventional rule-id spelling."""
    if label not in CWE_LABELS:
        raise ValueError(f"not a CWE label: {label!r}")
    return f"CWE-{label[3:]}"


@dataclass(frozen=True)
class MethodPattern:
    """A method matcher: exact canonical signature, or name and arity only.

    ``name_and_arity`` patterns may use ``*`` as the qualifier and ``?`` for
    parameter types, e.g. ``*.executeQuery(?)``.
    """

    signature: str
    match_mode: str = "exact"

    def __post_init__(self):
        if self.match_mode not in PATTERN_MODES:
            raise ValueError(f"unknown match mode {self.match_mode!r}")
        parse_signature(self.signature)

    @property
    def name(self) -> str:
        return parse_signature(self.signature)[1]

    @property
    def arity(self) -> int:
        return len(parse_signature(self.signature)[2])


@dataclass(frozen=True)
class SourcePattern:
    """Where attacker data enters: the call's return or an out-parameter."""

    pattern: MethodPattern
    out: int | str = "return"  # "return" or a 0-based parameter index

    def __post_init__(self):
        _check_out(self.out)


@dataclass(frozen=True)
class SinkPattern:
    """Which argument positions must not receive tainted data."""

    pattern: MethodPattern
    in_indices: tuple[int, ...] = ()


@dataclass(frozen=True)
class CleansePattern:
    """A sanitizer or propagator: taint in at ``in_indices``, out at ``out``."""

    pattern: MethodPattern
    in_indices: tuple[int, ...] = ()
    out: int | str = "return"  # "return", "none", or a parameter index

    def __post_init__(self):
        _check_out(self.out, allow_none=True)


def _check_out(value, allow_none: bool = False) -> None:
    if isinstance(value, int):
        if value < 0:
            raise ValueError(f"out parameter index must be >= 0, got {value}")
        return
    allowed = ("return", "none") if allow_none else ("return",)
    if value not in allowed:
        raise ValueError(f"out must be {allowed} or a parameter index, got {value!r}")


@dataclass(frozen=True)
class TaintSpec:
    """One CWE's taint rule: flows from sources to sinks, minus sanitizers."""

    id: str
    cwe: str
    sources: tuple[SourcePattern, ...]
    sinks: tuple[SinkPattern, ...]
    sanitizers: tuple[CleansePattern, ...] = ()
    propagators: tuple[CleansePattern, ...] = ()
    message: str = ""


def _flow_out(record: MethodRecord, default: str = "return") -> int | str:
    if record.data_out == "none":
        return default
    return record.data_out


def _sink_in(record: MethodRecord) -> tuple[int, ...]:
    if record.data_in:
        return record.data_in
    arity = len(parse_signature(record.signature)[2])
    return tuple(range(arity))


def generate_specs(
    dataset: Dataset, cwes: list[str] | None = None
) -> tuple[list[TaintSpec], list[str]]:
    """One spec per requested CWE (default: all seven), plus diagnostics.

    For CWE c: sources are records labeled {source, c}, sinks {sink, c},
    sanitizers {sanitizer, c}. A CWE with no source (resp. sink) of its own
    falls back to general records — role label set, no CWE bits. CWEs still
    missing a source or sink produce a diagnostic instead of a spec. Output
    is sorted by CWE id and is insensitive to dataset record order.
    """
    wanted = list(cwes) if cwes is not None else list(CWE_LABELS)
    unknown = [c for c in wanted if c not in CWE_LABELS]
    if unknown:
        raise ValueError(f"unknown CWE labels in filter: {unknown}")

    records = sorted(dataset.records, key=lambda r: r.signature)

    def role_records(role: str, cwe: str) -> list[MethodRecord]:
        specific = [r for r in records if r.labels.has(role) and r.labels.has(cwe)]
        if specific:
            return specific
        return [
            r
            for r in records
            if r.labels.has(role) and not any(r.labels.has(c) for c in CWE_LABELS)
        ]

    specs: list[TaintSpec] = []
    diagnostics: list[str] = []
    for cwe in sorted(wanted):
        sources = role_records("source", cwe)
        sinks = role_records("sink", cwe)
        sanitizers = [
            r for r in records if r.labels.has("sanitizer") and r.labels.has(cwe)
        ]
        missing = [role for role, rs in (("source", sources), ("sink", sinks)) if not rs]
        if missing:
            diagnostics.append(f"{cwe}: no {' or '.join(missing)} records; no spec generated")
            continue
        specs.append(
            TaintSpec(
                id=f"srm-{cwe}",
                cwe=cwe,
                sources=tuple(
                    SourcePattern(MethodPattern(r.signature), _flow_out(r))
                    for r in sources
                ),
                sinks=tuple(
                    SinkPattern(MethodPattern(r.signature), _sink_in(r)) for r in sinks
                ),
                sanitizers=tuple(
                    CleansePattern(MethodPattern(r.signature), r.data_in, _flow_out(r, "none"))
                    for r in sanitizers
                ),
                message=(
                    f"Tainted data reaches a {cwe_display(cwe)} sink without sanitization"
                ),
            )
        )
    return specs, diagnostics


def validate_spec(spec: TaintSpec) -> list[str]:
    """Structural problems with one spec; empty list means valid."""
    problems: list[str] = []
    if spec.cwe not in CWE_LABELS:
        problems.append(f"unknown cwe {spec.cwe!r}")
    if not spec.sources:
        problems.append("spec must define at least one source")
    if not spec.sinks:
        problems.append("spec must define at least one sink")

    def check_indices(role: str, pattern: MethodPattern, indices) -> None:
        if pattern.match_mode != "exact":
            return
        arity = pattern.arity
        for index in indices:
            if not 0 <= index < arity:
                problems.append(
                    f"{role} index {index} out of range for {pattern.signature}"
                    f" (arity {arity})"
                )

    for source in spec.sources:
        if isinstance(source.out, int):
            check_indices("source out", source.pattern, [source.out])
    for sink in spec.sinks:
        check_indices("sink in", sink.pattern, sink.in_indices)
    for group_name, group in (("sanitizer", spec.sanitizers), ("propagator", spec.propagators)):
        for entry in group:
            check_indices(f"{group_name} in", entry.pattern, entry.in_indices)
            if isinstance(entry.out, int):
                check_indices(f"{group_name} out", entry.pattern, [entry.out])

    source_sigs = {s.pattern.signature for s in spec.sources}
    sink_sigs = {s.pattern.signature for s in spec.sinks}
    for overlap in sorted(source_sigs & sink_sigs):
        problems.append(f"warning: pattern {overlap} is both source and sink")
    return problems


# -- spec file IO -------------------------------------------------------------


def _out_to_json(out: int | str):
    return {"parameter": out} if isinstance(out, int) else out


def _pattern_to_json(pattern: MethodPattern) -> dict:
    return {"signature": pattern.signature, "mode": pattern.match_mode}


def specs_to_json(specs: list[TaintSpec]) -> dict:
    return {
        "version": SPEC_FORMAT_VERSION,
        "specs": [
            {
                "id": spec.id,
                "cwe": spec.cwe,
                "sources": [
                    {"pattern": _pattern_to_json(s.pattern), "out": _out_to_json(s.out)}
                    for s in spec.sources
                ],
                "sinks": [
                    {"pattern": _pattern_to_json(s.pattern), "in": list(s.in_indices)}
                    for s in spec.sinks
                ],
                "sanitizers": [
                    {
                        "pattern": _pattern_to_json(s.pattern),
                        "in": list(s.in_indices),
                        "out": _out_to_json(s.out),
                    }
                    for s in spec.sanitizers
                ],
                "propagators": [
                    {
                        "pattern": _pattern_to_json(s.pattern),
                        "in": list(s.in_indices),
                        "out": _out_to_json(s.out),
                    }
                    for s in spec.propagators
                ],
                "message": spec.message,
            }
            for spec in specs
        ],
    }


def save_specs(specs: list[TaintSpec], path) -> None:
    Path(path).write_text(
        json.dumps(specs_to_json(specs), indent=2) + "\n", encoding="utf-8"
    )


def _out_from_json(raw, where: str, allow_none: bool = False):
    if isinstance(raw, dict):
        if set(raw) != {"parameter"} or not isinstance(raw.get("parameter"), int):
            raise FormatError(where, "out object must be {\"parameter\": int}")
        return raw["parameter"]
    if raw == "return" or (allow_none and raw == "none"):
        return raw
    raise FormatError(where, f"invalid out value {raw!r}")


def _pattern_from_json(raw, where: str) -> MethodPattern:
    if not isinstance(raw, dict) or "signature" not in raw:
        raise FormatError(where, "pattern must be an object with a signature")
    mode = raw.get("mode", "exact")
    try:
        return MethodPattern(signature=raw["signature"], match_mode=mode)
    except ValueError as exc:
        raise FormatError(where, str(exc)) from exc


def _indices_from_json(raw, where: str) -> tuple[int, ...]:
    if not isinstance(raw, list) or any(
        not isinstance(i, int) or isinstance(i, bool) or i < 0 for i in raw
    ):
        raise FormatError(where, "in must be a list of parameter indices")
    return tuple(raw)


def load_specs(document: str, path_hint: str = "<specs>") -> list[TaintSpec]:
    """Parse and validate a spec document; fails atomically via FormatError."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise FormatError(path_hint, f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("specs"), list):
        raise FormatError(path_hint, "document must have a specs list")
    specs: list[TaintSpec] = []
    for i, entry in enumerate(raw["specs"]):
        where = f"/specs/{i}"
        if not isinstance(entry, dict):
            raise FormatError(where, "spec entry must be an object")
        try:
            spec = TaintSpec(
                id=entry.get("id", f"spec-{i}"),
                cwe=entry.get("cwe", ""),
                sources=tuple(
                    SourcePattern(
                        _pattern_from_json(s.get("pattern"), f"{where}/sources/{j}"),
                        _out_from_json(s.get("out", "return"), f"{where}/sources/{j}"),
                    )
                    for j, s in enumerate(entry.get("sources", []))
                ),
                sinks=tuple(
                    SinkPattern(
                        _pattern_from_json(s.get("pattern"), f"{where}/sinks/{j}"),
                        _indices_from_json(s.get("in", []), f"{where}/sinks/{j}"),
                    )
                    for j, s in enumerate(entry.get("sinks", []))
                ),
                sanitizers=tuple(
                    CleansePattern(
                        _pattern_from_json(s.get("pattern"), f"{where}/sanitizers/{j}"),
                        _indices_from_json(s.get("in", []), f"{where}/sanitizers/{j}"),
                        _out_from_json(
                            s.get("out", "return"), f"{where}/sanitizers/{j}", True
                        ),
                    )
                    for j, s in enumerate(entry.get("sanitizers", []))
                ),
                propagators=tuple(
                    CleansePattern(
                        _pattern_from_json(s.get("pattern"), f"{where}/propagators/{j}"),
                        _indices_from_json(s.get("in", []), f"{where}/propagators/{j}"),
                        _out_from_json(
                            s.get("out", "return"), f"{where}/propagators/{j}", True
                        ),
                    )
                    for j, s in enumerate(entry.get("propagators", []))
                ),
                message=entry.get("message", ""),
            )
        except ValueError as exc:
            raise FormatError(where, str(exc)) from exc
        errors = [p for p in validate_spec(spec) if not p.startswith("warning:")]
        if errors:
            raise FormatError(where, "; ".join(errors))
        specs.append(spec)
    return specs


def load_specs_file(path) -> list[TaintSpec]:
    return load_specs(Path(path).read_text(encoding="utf-8"), str(path))
