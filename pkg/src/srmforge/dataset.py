"""Labeled security-relevant-method (SRM) records: load, validate, split, merge.

A record ties one canonical method signature to a set of role/CWE labels plus
flow endpoints (which parameters feed the operation, where the result goes).
Datasets are immutable values; every mutation-shaped operation returns a new
dataset. The on-disk form is JSON with a canonical ordering (records sorted by
signature, stable field order) so that save(load(text)) is byte-stable.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, replace
from importlib import resources

from .javamodel import parse_signature

TAXONOMY: tuple[str, ...] = (
    "source",
    "sink",
    "sanitizer",
    "cwe78",
    "cwe79",
    "cwe89",
    "cwe306",
    "cwe601",
    "cwe862",
    "cwe863",
)

ROLE_LABELS: tuple[str, ...] = TAXONOMY[:3]
CWE_LABELS: tuple[str, ...] = TAXONOMY[3:]

DISCOVERY_KINDS = ("training", "detected", "manual")

DATASET_VERSION = "1"


class FormatError(Exception):
    """A dataset document (or one record in it) violates the schema."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


@dataclass(frozen=True)
class LabelSet:
    """Ten booleans aligned to TAXONOMY order; all-false means non-SRM."""

    bits: tuple[bool, ...] = (False,) * len(TAXONOMY)

    def __post_init__(self):
        if len(self.bits) != len(TAXONOMY):
            raise ValueError(f"expected {len(TAXONOMY)} bits, got {len(self.bits)}")

    @staticmethod
    def from_names(names) -> "LabelSet":
        wanted = set(names)
        unknown = wanted - set(TAXONOMY)
        if unknown:
            raise ValueError(f"unknown labels: {sorted(unknown)}")
        return LabelSet(tuple(label in wanted for label in TAXONOMY))

    def names(self) -> list[str]:
        return [label for label, bit in zip(TAXONOMY, self.bits) if bit]

    def has(self, label: str) -> bool:
        return self.bits[TAXONOMY.index(label)]

    def is_empty(self) -> bool:
        return not any(self.bits)


@dataclass(frozen=True)
class MethodRecord:
    """One labeled method.

    data_in lists 0-based parameter indices feeding the security-relevant
    operation; data_out is "return", "none", or the index of an out-parameter.
    """

    signature: str
    labels: LabelSet
    data_in: tuple[int, ...] = ()
    data_out: int | str = "none"
    discovery: str = "training"
    note: str | None = None


@dataclass(frozen=True)
class Dataset:
    records: tuple[MethodRecord, ...] = ()
    version: str = DATASET_VERSION
    taxonomy: tuple[str, ...] = TAXONOMY

    def by_signature(self, signature: str) -> MethodRecord | None:
        for record in self.records:
            if record.signature == signature:
                return record
        return None


def _check_record(raw: dict, path: str) -> MethodRecord:
    if not isinstance(raw, dict):
        raise FormatError(path, "record must be an object")
    allowed = {"signature", "labels", "dataIn", "dataOut", "discovery", "note"}
    extra = set(raw) - allowed
    if extra:
        raise FormatError(path, f"unknown fields: {sorted(extra)}")

    signature = raw.get("signature")
    if not isinstance(signature, str):
        raise FormatError(f"{path}/signature", "missing or non-text signature")
    try:
        _, _, params = parse_signature(signature)
    except ValueError as err:
        raise FormatError(f"{path}/signature", str(err)) from None

    labels_raw = raw.get("labels")
    if not isinstance(labels_raw, list) or not all(isinstance(x, str) for x in labels_raw):
        raise FormatError(f"{path}/labels", "labels must be a list of label ids")
    try:
        labels = LabelSet.from_names(labels_raw)
    except ValueError as err:
        raise FormatError(f"{path}/labels", str(err)) from None

    data_in_raw = raw.get("dataIn", [])
    if not isinstance(data_in_raw, list) or not all(
        isinstance(i, int) and not isinstance(i, bool) for i in data_in_raw
    ):
        raise FormatError(f"{path}/dataIn", "dataIn must be a list of parameter indices")
    data_in = tuple(sorted(set(data_in_raw)))
    for index in data_in:
        if index < 0 or index >= len(params):
            raise FormatError(
                f"{path}/dataIn",
                f"parameter index {index} out of range for {len(params)} parameter(s)",
            )

    data_out_raw = raw.get("dataOut", "none")
    data_out: int | str
    if data_out_raw in ("return", "none"):
        data_out = data_out_raw
    elif (
        isinstance(data_out_raw, dict)
        and set(data_out_raw) == {"parameter"}
        and isinstance(data_out_raw["parameter"], int)
        and not isinstance(data_out_raw["parameter"], bool)
    ):
        data_out = data_out_raw["parameter"]
        if data_out < 0 or data_out >= len(params):
            raise FormatError(
                f"{path}/dataOut",
                f"parameter index {data_out} out of range for {len(params)} parameter(s)",
            )
    else:
        raise FormatError(f"{path}/dataOut", 'dataOut must be "return", "none", or {"parameter": i}')

    discovery = raw.get("discovery", "training")
    if discovery not in DISCOVERY_KINDS:
        raise FormatError(f"{path}/discovery", f"discovery must be one of {DISCOVERY_KINDS}")

    note = raw.get("note")
    if note is not None and not isinstance(note, str):
        raise FormatError(f"{path}/note", "note must be text")

    return MethodRecord(
        signature=signature,
        labels=labels,
        data_in=data_in,
        data_out=data_out,
        discovery=discovery,
        note=note,
    )


def load_dataset(document: str) -> Dataset:
    """Parse and validate the JSON dataset document; fails atomically."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as err:
        raise FormatError("/", f"not valid JSON: {err}") from None
    if not isinstance(raw, dict):
        raise FormatError("/", "top level must be an object")
    version = raw.get("version")
    if not isinstance(version, str):
        raise FormatError("/version", "missing or non-text version")
    methods = raw.get("methods")
    if not isinstance(methods, list):
        raise FormatError("/methods", "missing methods list")

    records: list[MethodRecord] = []
    seen: dict[str, int] = {}
    for i, raw_record in enumerate(methods):
        record = _check_record(raw_record, f"/methods/{i}")
        if record.signature in seen:
            raise FormatError(
                f"/methods/{i}",
                f"duplicate signature {record.signature!r} (also at index {seen[record.signature]})",
            )
        seen[record.signature] = i
        records.append(record)
    return Dataset(records=tuple(records), version=version)


def bundled_dataset() -> Dataset:
    """The curated method corpus shipped inside the package."""
    text = resources.files("srmforge.data").joinpath("srm_dataset.json").read_text()
    return load_dataset(text)


def _record_to_json(record: MethodRecord) -> dict:
    if record.data_out in ("return", "none"):
        data_out = record.data_out
    else:
        data_out = {"parameter": record.data_out}
    out = {
        "signature": record.signature,
        "labels": record.labels.names(),
        "dataIn": list(record.data_in),
        "dataOut": data_out,
        "discovery": record.discovery,
    }
    if record.note is not None:
        out["note"] = record.note
    return out


def save_dataset(d: Dataset) -> str:
    """Serialize to the canonical JSON form: records sorted by signature."""
    document = {
        "version": d.version,
        "methods": [
            _record_to_json(r) for r in sorted(d.records, key=lambda r: r.signature)
        ],
    }
    return json.dumps(document, indent=2) + "\n"


def validate_dataset(d: Dataset) -> list[str]:
    """Non-fatal quality warnings (load_dataset already enforced the schema)."""
    warnings: list[str] = []
    for record in d.records:
        names = record.labels.names()
        has_cwe = any(label in CWE_LABELS for label in names)
        has_role = any(label in ROLE_LABELS for label in names)
        if has_cwe and not has_role:
            warnings.append(
                f"{record.signature}: CWE labels {names} without any role label"
            )
    return warnings


def merge_records(base: Dataset, edits: list[MethodRecord]) -> Dataset:
    """Apply manual edits: replace matching signatures, append new ones.

    Every merged record carries discovery="manual"; applying the same edits
    twice gives the same dataset as applying them once. Later edits to the
    same signature win.
    """
    merged: dict[str, MethodRecord] = {r.signature: r for r in base.records}
    order = [r.signature for r in base.records]
    for edit in edits:
        stamped = replace(edit, discovery="manual")
        if stamped.signature not in merged:
            order.append(stamped.signature)
        merged[stamped.signature] = stamped
    return replace(base, records=tuple(merged[sig] for sig in order))


def split_dataset(d: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Label-blind seeded partition with ⌈n·train_fraction⌉ training records."""
    if not d.records:
        raise ValueError("cannot split an empty dataset")
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must be in (0,1)")
    indices = list(range(len(d.records)))
    random.Random(seed).shuffle(indices)
    cut = math.ceil(len(indices) * train_fraction)
    train = tuple(d.records[i] for i in sorted(indices[:cut]))
    test = tuple(d.records[i] for i in sorted(indices[cut:]))
    return replace(d, records=train), replace(d, records=test)


def dataset_stats(d: Dataset) -> dict:
    """Counts per label, label-set histogram, co-occurrence, CWE-without-role."""
    label_counts = {label: 0 for label in TAXONOMY}
    histogram: dict[str, int] = {}
    size = len(TAXONOMY)
    cooccurrence = [[0] * size for _ in range(size)]
    cwe_without_role = 0
    for record in d.records:
        names = record.labels.names()
        for label in names:
            label_counts[label] += 1
        key = ",".join(names) if names else "(none)"
        histogram[key] = histogram.get(key, 0) + 1
        for a in names:
            for b in names:
                cooccurrence[TAXONOMY.index(a)][TAXONOMY.index(b)] += 1
        if any(n in CWE_LABELS for n in names) and not any(n in ROLE_LABELS for n in names):
            cwe_without_role += 1
    total = len(d.records)
    return {
        "record_count": total,
        "label_counts": label_counts,
        "label_set_histogram": dict(sorted(histogram.items())),
        "cooccurrence": cooccurrence,
        "cwe_without_role_fraction": (cwe_without_role / total) if total else 0.0,
    }
