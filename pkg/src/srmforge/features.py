"""The fixed 119-cell feature schema and per-method extraction.

Cells are partitioned 13 numeric / 99 binary / 7 categorical. Numeric cells
are structural counts over the statement model; binary cells test lexical
tokens against configurable parts of the signature and body; categorical
cells read modifiers and type shapes. The token lexicon is data (a JSON file
shipped with the package), not code, so deployments can swap it out.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from .javamodel import MethodModel, ProgramModel, Statement, parse_signature

NUMERIC_FEATURE_IDS: tuple[str, ...] = (
    "method_lines",
    "invocation_count",
    "branch_count",
    "loop_count",
    "handler_count",
    "parameter_count",
    "variables_defined",
    "variables_used",
    "class_lines",
    "class_method_count",
    "class_name_token_count",
    "statement_count",      # extension beyond the published counts
    "max_nesting_depth",    # extension beyond the published counts
)

TOKEN_SCOPES: tuple[str, ...] = (
    "method_name",
    "class_name",
    "invoked_names",
    "parameter_types",
    "return_type",
)

_PRIMITIVE_TYPES = frozenset(
    {"boolean", "byte", "char", "double", "float", "int", "long", "short"}
)
_COLLECTION_MARKERS = ("List", "Set", "Map", "Collection", "Iterable", "Iterator", "Array")

CATEGORICAL_FEATURES: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("method_visibility", ("public", "protected", "private", "default")),
    ("method_static", ("yes", "no")),
    ("return_type_category", ("void", "primitive", "string-like", "collection-like", "other")),
    ("parameter_count_bucket", ("0", "1", "2", "3+")),
    ("class_visibility", ("public", "protected", "private", "default")),
    ("class_abstractness", ("abstract", "concrete")),
    ("is_constructor", ("yes", "no")),
)


class SchemaMismatch(Exception):
    """A feature vector does not fit the schema it is being used with."""


@dataclass(frozen=True)
class TokenGroup:
    id: str
    token: str
    scopes: tuple[str, ...]


@dataclass(frozen=True)
class TokenTable:
    schema_version: str
    groups: tuple[TokenGroup, ...]


@dataclass(frozen=True)
class SchemaEntry:
    id: str
    kind: str  # numeric | binary | categorical
    categories: tuple[str, ...] | None = None


@dataclass(frozen=True)
class FeatureSchema:
    version: str
    entries: tuple[SchemaEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class FeatureVector:
    schema_version: str
    values: tuple[float | int, ...]


def load_token_table(document: str) -> TokenTable:
    raw = json.loads(document)
    groups = []
    for g in raw["groups"]:
        scopes = tuple(g["scopes"])
        unknown = set(scopes) - set(TOKEN_SCOPES)
        if unknown:
            raise ValueError(f"token group {g['id']}: unknown scopes {sorted(unknown)}")
        token = g["token"]
        if not token or token != token.lower():
            raise ValueError(f"token group {g['id']}: token must be non-empty lowercase")
        groups.append(TokenGroup(id=g["id"], token=token, scopes=scopes))
    if len({g.id for g in groups}) != len(groups):
        raise ValueError("token group ids must be unique")
    return TokenTable(schema_version=raw["schema_version"], groups=tuple(groups))


def default_token_table() -> TokenTable:
    text = resources.files("srmforge.data").joinpath("token_table.json").read_text()
    return load_token_table(text)


def build_schema(tokens: TokenTable) -> FeatureSchema:
    """Assemble the 13 + 99 + 7 = 119 entry schema from a 99-group lexicon."""
    if len(tokens.groups) != 99:
        raise ValueError(f"token table must define 99 groups, has {len(tokens.groups)}")
    entries: list[SchemaEntry] = []
    for fid in NUMERIC_FEATURE_IDS:
        entries.append(SchemaEntry(id=fid, kind="numeric"))
    for group in tokens.groups:
        entries.append(SchemaEntry(id=group.id, kind="binary"))
    for fid, categories in CATEGORICAL_FEATURES:
        entries.append(SchemaEntry(id=fid, kind="categorical", categories=categories))
    if len({e.id for e in entries}) != len(entries):
        raise ValueError("schema ids collide between numeric/binary/categorical sections")
    return FeatureSchema(version=tokens.schema_version, entries=tuple(entries))


def default_schema() -> FeatureSchema:
    return build_schema(default_token_table())


def token_match(signature_part: str, token: str) -> bool:
    """Case-insensitive substring test; the token itself is lowercase."""
    return token in signature_part.lower()


def split_camel_tokens(name: str) -> list[str]:
    """UserServlet -> [User, Servlet]; HTTPResponse -> [HTTP, Response]."""
    parts: list[str] = []
    for chunk in re.split(r"[_$]+", name):
        parts.extend(re.findall(r"[A-Z]+(?![a-z])|[A-Z][a-z0-9]*|[a-z0-9]+", chunk))
    return parts


def _nesting_depth(stmts: list[Statement]) -> int:
    depth = 0
    for stmt in stmts:
        inner = 0
        for _, body in stmt.blocks:
            inner = max(inner, _nesting_depth(body))
        depth = max(depth, 1 + inner)
    return depth


def structural_counts(m: MethodModel) -> list[float]:
    """The 13 numeric cells, in schema order; body-free methods count zeros."""
    stmts = list(m.statements())
    defined = {v for s in stmts for v in s.defs}
    used = {v for s in stmts for v in s.uses}
    handler_count = sum(
        1 for s in stmts if s.kind == "try_catch" for label, _ in s.blocks if label == "catch"
    )
    owner = m.owner
    return [
        float(m.line_span[1] - m.line_span[0] + 1) if m.has_body else 0.0,
        float(sum(1 for s in stmts if s.kind == "invocation")),
        float(sum(1 for s in stmts if s.kind == "if")),
        float(sum(1 for s in stmts if s.kind == "loop")),
        float(handler_count),
        float(len(m.parameters)),
        float(len(defined)),
        float(len(used)),
        float(owner.loc) if owner else 0.0,
        float(len(owner.methods)) if owner else 0.0,
        float(len(split_camel_tokens(owner.name))) if owner else 0.0,
        float(len(stmts)),
        float(_nesting_depth(m.body)),
    ]


def _scope_parts(m: MethodModel, scope: str) -> list[str]:
    if scope == "method_name":
        return [m.name]
    if scope == "class_name":
        return [m.owner.name] if m.owner else []
    if scope == "invoked_names":
        return [s.call.callee_name for s in m.statements() if s.call]
    if scope == "parameter_types":
        return [ptype for _, ptype in m.parameters]
    if scope == "return_type":
        return [m.return_type]
    raise ValueError(f"unknown token scope {scope!r}")


def _return_type_category(return_type: str) -> str:
    base = return_type.split("<")[0]
    if base == "void":
        return "void"
    if base in _PRIMITIVE_TYPES:
        return "primitive"
    if "String" in base or base == "CharSequence":
        return "string-like"
    if return_type.endswith("[]") or any(marker in base for marker in _COLLECTION_MARKERS):
        return "collection-like"
    return "other"


def _visibility(modifiers: frozenset) -> str:
    for v in ("public", "protected", "private"):
        if v in modifiers:
            return v
    return "default"


def _bucket(count: int) -> str:
    return str(count) if count < 3 else "3+"


def _categorical_values(m: MethodModel) -> list[str]:
    owner = m.owner
    return [
        _visibility(m.modifiers),
        "yes" if "static" in m.modifiers else "no",
        _return_type_category(m.return_type),
        _bucket(len(m.parameters)),
        _visibility(owner.modifiers) if owner else "default",
        "abstract" if owner and "abstract" in owner.modifiers else "concrete",
        "yes" if m.is_constructor else "no",
    ]


def extract_features(
    m: MethodModel,
    p: ProgramModel,  # noqa: ARG001 - part of the call contract; body-local today
    schema: FeatureSchema,
    tokens: TokenTable,
) -> FeatureVector:
    """One 119-cell vector for one method; deterministic for equal inputs."""
    values: list[float | int] = list(structural_counts(m))
    scope_cache = {scope: _scope_parts(m, scope) for scope in TOKEN_SCOPES}
    for group in tokens.groups:
        hit = any(
            token_match(part, group.token)
            for scope in group.scopes
            for part in scope_cache[scope]
        )
        values.append(1 if hit else 0)
    categorical = _categorical_values(m)
    for (_, categories), value in zip(CATEGORICAL_FEATURES, categorical):
        values.append(categories.index(value))
    vector = FeatureVector(schema_version=schema.version, values=tuple(values))
    check_vector(vector, schema)
    return vector


def features_from_signature(
    signature: str, schema: FeatureSchema, tokens: TokenTable
) -> FeatureVector:
    """Vector for a method known only by signature (no source available).

    Body-derived numeric cells are zero; token scopes that need a body
    (invoked_names) scan nothing; categorical cells take signature-derivable
    values and defaults elsewhere.
    """
    qualifier, name, params = parse_signature(signature)
    class_name = qualifier.rsplit(".", 1)[-1]
    values: list[float | int] = [0.0] * len(NUMERIC_FEATURE_IDS)
    values[NUMERIC_FEATURE_IDS.index("parameter_count")] = float(len(params))
    values[NUMERIC_FEATURE_IDS.index("class_name_token_count")] = float(
        len(split_camel_tokens(class_name))
    )
    scope_cache = {
        "method_name": [name],
        "class_name": [class_name],
        "invoked_names": [],
        "parameter_types": params,
        "return_type": [],
    }
    for group in tokens.groups:
        hit = any(
            token_match(part, group.token)
            for scope in group.scopes
            for part in scope_cache[scope]
        )
        values.append(1 if hit else 0)
    categorical = [
        "public",
        "no",
        "other",
        _bucket(len(params)),
        "public",
        "concrete",
        "yes" if name == class_name else "no",
    ]
    for (_, categories), value in zip(CATEGORICAL_FEATURES, categorical):
        values.append(categories.index(value))
    vector = FeatureVector(schema_version=schema.version, values=tuple(values))
    check_vector(vector, schema)
    return vector


def check_vector(vector: FeatureVector, schema: FeatureSchema) -> None:
    """Raise SchemaMismatch unless the vector fits the schema exactly."""
    if vector.schema_version != schema.version:
        raise SchemaMismatch(
            f"vector version {vector.schema_version!r} != schema {schema.version!r}"
        )
    if len(vector.values) != len(schema.entries):
        raise SchemaMismatch(
            f"vector has {len(vector.values)} cells, schema requires {len(schema.entries)}"
        )
    for entry, value in zip(schema.entries, vector.values):
        if entry.kind == "numeric":
            if value < 0 or value != value or value in (float("inf"), float("-inf")):
                raise SchemaMismatch(f"{entry.id}: numeric cell must be finite and >= 0")
        elif entry.kind == "binary":
            if value not in (0, 1):
                raise SchemaMismatch(f"{entry.id}: binary cell must be 0 or 1")
        else:
            if not (isinstance(value, int) and 0 <= value < len(entry.categories)):
                raise SchemaMismatch(f"{entry.id}: categorical index {value} out of range")
