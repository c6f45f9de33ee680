"""ARFF serialization for labeled feature matrices.

Layout convention: the 10 label attributes come FIRST as {0,1} nominals, then
the 119 feature attributes; the relation name carries a ``-C 10`` marker so
multi-label tooling can find the label block. The reader inverts the writer
exactly: numeric cells parse to floats, nominal cells to their index in the
attribute's declared value list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .dataset import TAXONOMY, LabelSet
from .features import FeatureSchema, FeatureVector, SchemaMismatch, check_vector

_SAFE_TOKEN = re.compile(r"^[A-Za-z0-9_.\-]+$")


@dataclass(frozen=True)
class ArffDocument:
    relation: str
    label_count: int
    attributes: tuple[tuple[str, tuple[str, ...] | None], ...]  # (name, nominal values | None)
    rows: tuple[tuple[float | int, ...], ...]

    def label_matrix(self) -> list[tuple[int, ...]]:
        return [tuple(int(cell) for cell in row[: self.label_count]) for row in self.rows]

    def feature_matrix(self) -> list[tuple[float | int, ...]]:
        return [row[self.label_count :] for row in self.rows]


def _quote(value: str) -> str:
    return value if _SAFE_TOKEN.match(value) else f"'{value}'"


def emit_arff(records: list[tuple[FeatureVector, LabelSet]], schema: FeatureSchema) -> str:
    """Serialize (vector, labels) pairs; raises SchemaMismatch on bad vectors."""
    lines = [f"@relation 'srm -C {len(TAXONOMY)}'", ""]
    for label in TAXONOMY:
        lines.append(f"@attribute {label} {{0,1}}")
    for entry in schema.entries:
        if entry.kind == "numeric":
            lines.append(f"@attribute {entry.id} numeric")
        elif entry.kind == "binary":
            lines.append(f"@attribute {entry.id} {{0,1}}")
        else:
            values = ",".join(_quote(c) for c in entry.categories)
            lines.append(f"@attribute {entry.id} {{{values}}}")
    lines.append("")
    lines.append("@data")
    for vector, labels in records:
        check_vector(vector, schema)
        cells = [str(int(bit)) for bit in labels.bits]
        for entry, value in zip(schema.entries, vector.values):
            if entry.kind == "numeric":
                cells.append(repr(float(value)))
            elif entry.kind == "binary":
                cells.append(str(int(value)))
            else:
                cells.append(_quote(entry.categories[value]))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _split_nominal(spec: str) -> tuple[str, ...]:
    body = spec.strip()[1:-1]
    values: list[str] = []
    current: list[str] = []
    quoted = False
    for ch in body:
        if ch == "'":
            quoted = not quoted
        elif ch == "," and not quoted:
            values.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    values.append("".join(current).strip())
    return tuple(values)


def _split_row(line: str) -> list[str]:
    cells: list[str] = []
    current: list[str] = []
    quoted = False
    for ch in line:
        if ch == "'":
            quoted = not quoted
        elif ch == "," and not quoted:
            cells.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    cells.append("".join(current).strip())
    return cells


def read_arff(text: str) -> ArffDocument:
    """Parse ARFF text produced by emit_arff (plus obvious hand edits)."""
    relation = ""
    label_count = 0
    attributes: list[tuple[str, tuple[str, ...] | None]] = []
    rows: list[tuple[float | int, ...]] = []
    in_data = False
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line or line.startswith("%"):
            continue
        lowered = line.lower()
        if lowered.startswith("@relation"):
            relation = line[len("@relation") :].strip().strip("'\"")
            marker = re.search(r"-C\s+(\d+)", relation)
            label_count = int(marker.group(1)) if marker else 0
            continue
        if lowered.startswith("@attribute"):
            rest = line[len("@attribute") :].strip()
            if rest.startswith("'"):
                end = rest.index("'", 1)
                name, spec = rest[1:end], rest[end + 1 :].strip()
            else:
                name, _, spec = rest.partition(" ")
                spec = spec.strip()
            if spec.startswith("{"):
                attributes.append((name, _split_nominal(spec)))
            else:
                attributes.append((name, None))
            continue
        if lowered.startswith("@data"):
            in_data = True
            continue
        if not in_data:
            continue
        cells = _split_row(line)
        if len(cells) != len(attributes):
            raise SchemaMismatch(
                f"data row has {len(cells)} cells, expected {len(attributes)}"
            )
        parsed: list[float | int] = []
        for (name, nominal), cell in zip(attributes, cells):
            if nominal is None:
                parsed.append(float(cell))
            else:
                if cell not in nominal:
                    raise SchemaMismatch(f"{name}: value {cell!r} not in {nominal}")
                parsed.append(nominal.index(cell))
        rows.append(tuple(parsed))
    return ArffDocument(
        relation=relation,
        label_count=label_count,
        attributes=tuple(attributes),
        rows=tuple(rows),
    )
