"""Multi-label models: Binary Relevance, Pruned Sets, and ensembles thereof.

Binary Relevance trains one independent binary classifier per taxonomy label.
Pruned Sets treats whole label sets as classes after pruning rare sets
(reassigning them to their maximal frequent proper subsets), so predictions
can exploit label co-occurrence. The ensemble variant votes over Pruned Sets
members trained on seeded subsamples. All trained models are immutable, carry
their feature transform, and serialize to versioned JSON.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..dataset import TAXONOMY, LabelSet
from ..features import FeatureSchema, FeatureVector, SchemaMismatch
from .learners import BaseLearner, classifier_from_json, train_base
from .transforms import FeatureTransform

MODEL_KINDS = ("binary_relevance", "pruned_sets", "ensemble_pruned_sets")
MODEL_FORMAT_VERSION = "1"


class EmptyAfterPruning(Exception):
    """Pruning removed every label set; lower the pruning threshold."""


@dataclass(frozen=True)
class TrainingMatrix:
    """Labeled feature rows sharing one schema."""

    rows: tuple[tuple[FeatureVector, LabelSet], ...]
    schema: FeatureSchema

    def __post_init__(self):
        for vector, _ in self.rows:
            if vector.schema_version != self.schema.version:
                raise SchemaMismatch(
                    f"row version {vector.schema_version!r} != schema "
                    f"{self.schema.version!r}"
                )

    @staticmethod
    def from_pairs(pairs, schema: FeatureSchema) -> "TrainingMatrix":
        return TrainingMatrix(rows=tuple(pairs), schema=schema)

    def raw_matrix(self) -> np.ndarray:
        return np.array(
            [[float(v) for v in vector.values] for vector, _ in self.rows]
        )

    def label_sets(self) -> list[LabelSet]:
        return [labels for _, labels in self.rows]

    def subset(self, indices) -> "TrainingMatrix":
        return TrainingMatrix(
            rows=tuple(self.rows[i] for i in indices), schema=self.schema
        )

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class ModelConfig:
    """One point in the model space; irrelevant knobs keep their defaults."""

    kind: str
    base: BaseLearner
    p: int = 1
    m: int = 10
    sample_fraction: float = 0.63
    t: float = 0.5

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.p < 0:
            raise ValueError("pruning threshold p must be >= 0")
        if self.m < 1:
            raise ValueError("ensemble size m must be >= 1")
        if not 0 < self.sample_fraction <= 1:
            raise ValueError("sample_fraction must be in (0, 1]")
        if not 0 <= self.t <= 1:
            raise ValueError("vote threshold t must be in [0, 1]")

    @property
    def config_id(self) -> str:
        if self.kind == "binary_relevance":
            return f"br:{self.base.kind}"
        if self.kind == "pruned_sets":
            return f"ps:{self.base.kind}:p{self.p}"
        return f"eps:{self.base.kind}:p{self.p}:m{self.m}:t{self.t:g}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "base": self.base.to_json(),
            "p": self.p,
            "m": self.m,
            "sample_fraction": self.sample_fraction,
            "t": self.t,
        }

    @staticmethod
    def from_json(data: dict) -> "ModelConfig":
        return ModelConfig(
            kind=data["kind"],
            base=BaseLearner.from_json(data["base"]),
            p=data["p"],
            m=data["m"],
            sample_fraction=data["sample_fraction"],
            t=data["t"],
        )


def _bitstring(labels: LabelSet) -> str:
    return "".join("1" if bit else "0" for bit in labels.bits)


def _is_proper_subset(inner: LabelSet, outer: LabelSet) -> bool:
    return inner.bits != outer.bits and all(
        not i or o for i, o in zip(inner.bits, outer.bits)
    )


def prune_label_sets(
    rows: list[LabelSet], p: int
) -> tuple[list[LabelSet], dict[LabelSet, list[LabelSet]]]:
    """Split observed label sets into frequent sets and a reassignment map.

    A set is frequent when it occurs more than ``p`` times. Each infrequent
    set maps to its maximal frequent proper subsets (none of which contains
    another); sets with no frequent proper subset map to the empty list and
    their rows are dropped by the Pruned Sets transform. Both outputs are
    ordered by bit pattern for determinism.
    """
    if not rows:
        raise ValueError("need at least one label set")
    if p < 0:
        raise ValueError("pruning threshold p must be >= 0")
    counts = Counter(rows)
    frequent = sorted(
        (labels for labels, count in counts.items() if count > p), key=_bitstring
    )
    reassignment: dict[LabelSet, list[LabelSet]] = {}
    for labels in sorted(counts, key=_bitstring):
        if counts[labels] > p:
            continue
        subsets = [f for f in frequent if _is_proper_subset(f, labels)]
        maximal = [
            s
            for s in subsets
            if not any(s is not other and _is_proper_subset(s, other) for other in subsets)
        ]
        reassignment[labels] = maximal
    return frequent, reassignment


@dataclass(frozen=True)
class PrunedSetsCore:
    """One multi-class model over frequent label sets (one-vs-rest)."""

    class_sets: tuple[LabelSet, ...]  # sorted by bit pattern
    classifiers: tuple  # parallel to class_sets
    expanded_rows: int  # training rows after reassignment/duplication

    def class_scores(self, transformed: np.ndarray) -> np.ndarray:
        return np.column_stack(
            [clf.predict_proba(transformed) for clf in self.classifiers]
        )

    def predict_bits(self, transformed: np.ndarray) -> np.ndarray:
        """(n, 10) 0/1 matrix; argmax ties go to the smallest class id."""
        winners = np.argmax(self.class_scores(transformed), axis=1)
        return np.array(
            [[1 if b else 0 for b in self.class_sets[w].bits] for w in winners]
        )

    def to_json(self) -> dict:
        return {
            "classes": [_bitstring(s) for s in self.class_sets],
            "classifiers": [clf.to_json() for clf in self.classifiers],
            "expanded_rows": self.expanded_rows,
        }

    @staticmethod
    def from_json(data: dict) -> "PrunedSetsCore":
        sets = tuple(
            LabelSet(bits=tuple(ch == "1" for ch in bits)) for bits in data["classes"]
        )
        return PrunedSetsCore(
            class_sets=sets,
            classifiers=tuple(classifier_from_json(c) for c in data["classifiers"]),
            expanded_rows=data["expanded_rows"],
        )


@dataclass(frozen=True)
class MultiLabelModel:
    """A trained multi-label classifier plus everything needed to apply it."""

    kind: str
    config: ModelConfig
    schema_version: str
    transform: FeatureTransform
    components: tuple | None = None  # binary_relevance: 10 binary classifiers
    core: PrunedSetsCore | None = None  # pruned_sets
    members: tuple[PrunedSetsCore, ...] | None = None  # ensemble_pruned_sets
    diagnostics: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind == "binary_relevance" and len(self.components) != len(TAXONOMY):
            raise ValueError("binary relevance needs one component per label")
        if self.kind == "ensemble_pruned_sets" and not self.members:
            raise ValueError("ensemble needs at least one surviving member")


def _require_trainable(matrix: TrainingMatrix) -> None:
    if len(matrix) == 0:
        raise ValueError("training matrix is empty")


def _fit_inputs(matrix: TrainingMatrix) -> tuple[FeatureTransform, np.ndarray]:
    raw = matrix.raw_matrix()
    transform = FeatureTransform.fit(raw, matrix.schema)
    return transform, transform.apply(raw)


def train_binary_relevance(
    matrix: TrainingMatrix, base: BaseLearner
) -> MultiLabelModel:
    """One independent binary classifier per taxonomy label.

    Labels that never (or always) occur come back as constant components.
    """
    _require_trainable(matrix)
    transform, X = _fit_inputs(matrix)
    targets = np.array(
        [[1.0 if bit else 0.0 for bit in labels.bits] for labels in matrix.label_sets()]
    )
    components = tuple(
        train_base(X, targets[:, i], base) for i in range(len(TAXONOMY))
    )
    return MultiLabelModel(
        kind="binary_relevance",
        config=ModelConfig(kind="binary_relevance", base=base),
        schema_version=matrix.schema.version,
        transform=transform,
        components=components,
    )


def _train_ps_core(
    X: np.ndarray, label_sets: list[LabelSet], base: BaseLearner, p: int
) -> PrunedSetsCore:
    frequent, reassignment = prune_label_sets(label_sets, p)
    if not frequent:
        raise EmptyAfterPruning(
            f"no label set occurs more than {p} times in {len(label_sets)} rows"
        )
    frequent_set = set(frequent)
    row_features: list[np.ndarray] = []
    row_classes: list[LabelSet] = []
    for features, labels in zip(X, label_sets):
        classes = [labels] if labels in frequent_set else reassignment[labels]
        for cls in classes:
            row_features.append(features)
            row_classes.append(cls)
    expanded = np.array(row_features)
    classifiers = tuple(
        train_base(
            expanded,
            np.array([1.0 if cls == target else 0.0 for cls in row_classes]),
            base,
        )
        for target in frequent
    )
    return PrunedSetsCore(
        class_sets=tuple(frequent),
        classifiers=classifiers,
        expanded_rows=len(row_classes),
    )


def train_pruned_sets(
    matrix: TrainingMatrix, base: BaseLearner, p: int
) -> MultiLabelModel:
    """Label-set-as-class model; predictions are always frequent sets."""
    _require_trainable(matrix)
    transform, X = _fit_inputs(matrix)
    core = _train_ps_core(X, matrix.label_sets(), base, p)
    return MultiLabelModel(
        kind="pruned_sets",
        config=ModelConfig(kind="pruned_sets", base=base, p=p),
        schema_version=matrix.schema.version,
        transform=transform,
        core=core,
    )


def train_ensemble_pruned_sets(
    matrix: TrainingMatrix,
    base: BaseLearner,
    p: int = 1,
    m: int = 10,
    sample_fraction: float = 0.63,
    t: float = 0.5,
    seed: int = 0,
) -> MultiLabelModel:
    """m Pruned Sets members on seeded subsamples, combined by label votes.

    Members whose subsample prunes to nothing are skipped with a diagnostic;
    training fails only when every member is skipped.
    """
    _require_trainable(matrix)
    config = ModelConfig(
        kind="ensemble_pruned_sets",
        base=base,
        p=p,
        m=m,
        sample_fraction=sample_fraction,
        t=t,
    )
    transform, X = _fit_inputs(matrix)
    label_sets = matrix.label_sets()
    rng = random.Random(seed)
    size = math.ceil(len(matrix) * sample_fraction)
    members: list[PrunedSetsCore] = []
    diagnostics: list[str] = []
    for index in range(m):
        picked = sorted(rng.sample(range(len(matrix)), size))
        sample_sets = [label_sets[i] for i in picked]
        try:
            members.append(_train_ps_core(X[picked], sample_sets, base, p))
        except EmptyAfterPruning as exc:
            diagnostics.append(f"member {index} skipped: {exc}")
    if not members:
        raise EmptyAfterPruning(
            f"all {m} members pruned to nothing (p={p}); lower p"
        )
    return MultiLabelModel(
        kind="ensemble_pruned_sets",
        config=config,
        schema_version=matrix.schema.version,
        transform=transform,
        members=tuple(members),
        diagnostics=tuple(diagnostics),
    )


def train_model(matrix: TrainingMatrix, config: ModelConfig, seed: int = 0) -> MultiLabelModel:
    """Dispatch on config.kind; seed only matters for ensembles."""
    if config.kind == "binary_relevance":
        return train_binary_relevance(matrix, config.base)
    if config.kind == "pruned_sets":
        return train_pruned_sets(matrix, config.base, config.p)
    return train_ensemble_pruned_sets(
        matrix,
        config.base,
        p=config.p,
        m=config.m,
        sample_fraction=config.sample_fraction,
        t=config.t,
        seed=seed,
    )


def _batch_scores(model: MultiLabelModel, transformed: np.ndarray) -> np.ndarray:
    """(n, 10) per-label scores on already-transformed rows."""
    if model.kind == "binary_relevance":
        return np.column_stack(
            [clf.predict_proba(transformed) for clf in model.components]
        )
    if model.kind == "pruned_sets":
        return model.core.predict_bits(transformed).astype(float)
    votes = sum(member.predict_bits(transformed) for member in model.members)
    return votes / len(model.members)


def _decide(model: MultiLabelModel, scores: np.ndarray) -> list[LabelSet]:
    """Apply the model kind's decision rule to a (n, 10) score matrix."""
    if model.kind == "binary_relevance":
        on = scores >= 0.5
    elif model.kind == "pruned_sets":
        on = scores > 0.5  # scores are exactly 0.0/1.0 set membership
    else:
        # A label needs at least one vote even when t == 0, so that the
        # t extremes read as union (t=0) and intersection (t=1) of members.
        on = (scores > 0) & (scores >= model.config.t)
    return [LabelSet(bits=tuple(bool(b) for b in row)) for row in on]


def predict_batch(
    model: MultiLabelModel, vectors: list[FeatureVector]
) -> list[tuple[LabelSet, tuple[float, ...]]]:
    """Predict many vectors at once; scores are per-label values in [0,1]."""
    for vector in vectors:
        if vector.schema_version != model.schema_version:
            raise SchemaMismatch(
                f"vector version {vector.schema_version!r} != model "
                f"{model.schema_version!r}"
            )
    if not vectors:
        return []
    raw = np.array([[float(v) for v in vector.values] for vector in vectors])
    scores = _batch_scores(model, model.transform.apply(raw))
    decided = _decide(model, scores)
    return [
        (labels, tuple(float(s) for s in row))
        for labels, row in zip(decided, scores)
    ]


def predict_labels(
    model: MultiLabelModel, vector: FeatureVector
) -> tuple[LabelSet, tuple[float, ...]]:
    """Predicted label set plus per-label scores for one feature vector."""
    return predict_batch(model, [vector])[0]


def save_model(model: MultiLabelModel, path) -> None:
    if model.kind == "binary_relevance":
        payload = {"components": [clf.to_json() for clf in model.components]}
    elif model.kind == "pruned_sets":
        payload = {"core": model.core.to_json()}
    else:
        payload = {"members": [member.to_json() for member in model.members]}
    document = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": model.kind,
        "schema_version": model.schema_version,
        "config": model.config.to_json(),
        "transform": model.transform.to_json(),
        "diagnostics": list(model.diagnostics),
        "payload": payload,
    }
    Path(path).write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")


def load_model(path) -> MultiLabelModel:
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    if document.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(
            f"unsupported model format {document.get('format_version')!r}"
        )
    kind = document["kind"]
    payload = document["payload"]
    components = core = members = None
    if kind == "binary_relevance":
        components = tuple(classifier_from_json(c) for c in payload["components"])
    elif kind == "pruned_sets":
        core = PrunedSetsCore.from_json(payload["core"])
    else:
        members = tuple(PrunedSetsCore.from_json(m) for m in payload["members"])
    return MultiLabelModel(
        kind=kind,
        config=ModelConfig.from_json(document["config"]),
        schema_version=document["schema_version"],
        transform=FeatureTransform.from_json(document["transform"]),
        components=components,
        core=core,
        members=members,
        diagnostics=tuple(document["diagnostics"]),
    )
