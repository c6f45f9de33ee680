"""Binary base learners: L2-regularized logistic regression and a CART tree.

Both consume an already-preprocessed matrix (standardized numerics, one-hot
categoricals) and expose scores in [0,1] via predict_proba. Degenerate
targets (single class) collapse to a constant classifier at the observed
positive rate instead of failing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BASE_LEARNER_KINDS = ("logistic_regression", "decision_tree")


class DegenerateData(Exception):
    """Training targets contain a single class; no separating model exists."""


@dataclass(frozen=True)
class BaseLearner:
    """Configuration for one binary learner."""

    kind: str = "logistic_regression"
    learning_rate: float = 0.5
    l2: float = 1e-3
    epochs: int = 300
    max_depth: int = 6
    min_leaf: int = 2

    def __post_init__(self):
        if self.kind not in BASE_LEARNER_KINDS:
            raise ValueError(f"unknown base learner kind {self.kind!r}")
        if self.kind == "logistic_regression":
            if self.learning_rate <= 0 or self.l2 < 0 or self.epochs <= 0:
                raise ValueError("logistic hyperparameters out of range")
        else:
            if self.max_depth <= 0 or self.min_leaf <= 0:
                raise ValueError("tree hyperparameters out of range")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "learning_rate": self.learning_rate,
            "l2": self.l2,
            "epochs": self.epochs,
            "max_depth": self.max_depth,
            "min_leaf": self.min_leaf,
        }

    @staticmethod
    def from_json(data: dict) -> "BaseLearner":
        return BaseLearner(**data)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -35, 35)))


def loss_and_gradient(
    weights: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray]:
    """Mean logistic loss + L2 penalty and its analytic gradient.

    The last weight is the intercept (the trainer augments X with a ones
    column); the penalty excludes it.
    """
    p = _sigmoid(X @ weights)
    eps = 1e-12
    data_loss = -np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))
    penalty = 0.5 * l2 * float(weights[:-1] @ weights[:-1])
    grad = X.T @ (p - y) / len(y)
    grad = grad + l2 * np.concatenate([weights[:-1], [0.0]])
    return float(data_loss + penalty), grad


@dataclass(frozen=True)
class LogisticClassifier:
    weights: tuple[float, ...] | None   # includes trailing intercept
    constant: float | None = None       # set instead of weights when degenerate
    loss_history: tuple[float, ...] = field(default=(), compare=False, repr=False)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if self.constant is not None:
            return np.full(X.shape[0], self.constant)
        w = np.asarray(self.weights)
        augmented = np.hstack([X, np.ones((X.shape[0], 1))])
        return _sigmoid(augmented @ w)

    def to_json(self) -> dict:
        return {
            "type": "logistic",
            "weights": list(self.weights) if self.weights is not None else None,
            "constant": self.constant,
        }


def fit_logistic_weights(
    X: np.ndarray, y: np.ndarray, h: BaseLearner
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Strict trainer: raises DegenerateData when only one class is present."""
    y = np.asarray(y, dtype=float)
    if y.min() == y.max():
        raise DegenerateData(f"single-class targets (all {y[0]:g})")
    augmented = np.hstack([X, np.ones((X.shape[0], 1))])
    weights = np.zeros(augmented.shape[1])
    history = []
    for _ in range(h.epochs):
        loss, grad = loss_and_gradient(weights, augmented, y, h.l2)
        history.append(loss)
        weights = weights - h.learning_rate * grad
    return tuple(float(w) for w in weights), tuple(history)


def train_logistic(X: np.ndarray, y: np.ndarray, h: BaseLearner) -> LogisticClassifier:
    """Full-batch gradient descent; degenerate targets give a constant model."""
    if len(X) == 0 or len(X) != len(y):
        raise ValueError("need a non-empty matrix with matching targets")
    try:
        weights, history = fit_logistic_weights(X, y, h)
    except DegenerateData:
        return LogisticClassifier(weights=None, constant=float(np.mean(y)))
    return LogisticClassifier(weights=weights, loss_history=history)


# -- decision tree -----------------------------------------------------------


@dataclass(frozen=True)
class _TreeNode:
    # leaf when feature is None
    feature: int | None
    threshold: float
    left: "_TreeNode | None"
    right: "_TreeNode | None"
    value: float  # positive fraction at this node

    def to_json(self) -> dict:
        if self.feature is None:
            return {"value": self.value}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "value": self.value,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
        }

    @staticmethod
    def from_json(data: dict) -> "_TreeNode":
        if "feature" not in data:
            return _TreeNode(None, 0.0, None, None, data["value"])
        return _TreeNode(
            feature=data["feature"],
            threshold=data["threshold"],
            left=_TreeNode.from_json(data["left"]),
            right=_TreeNode.from_json(data["right"]),
            value=data["value"],
        )


def _gini(y: np.ndarray) -> float:
    if len(y) == 0:
        return 0.0
    p = y.mean()
    return float(2 * p * (1 - p))


def _best_split(X: np.ndarray, y: np.ndarray, min_leaf: int) -> tuple[int, float] | None:
    """(feature, threshold) with the largest impurity reduction; None if no split.

    Ties resolve to the lowest feature index, then the lowest threshold, so
    tree construction is deterministic.
    """
    n = len(y)
    parent = _gini(y)
    best_gain = 1e-12
    best: tuple[int, float] | None = None
    for feature in range(X.shape[1]):
        column = X[:, feature]
        order = np.argsort(column, kind="stable")
        xs = column[order]
        ys = y[order]
        # candidate boundaries: positions where the sorted value changes
        boundaries = np.nonzero(xs[:-1] < xs[1:])[0]
        if len(boundaries) == 0:
            continue
        pos_cum = np.cumsum(ys)
        n_left = boundaries + 1
        n_right = n - n_left
        keep = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not keep.any():
            continue
        boundaries = boundaries[keep]
        n_left = n_left[keep]
        n_right = n_right[keep]
        pos_left = pos_cum[boundaries]
        pos_right = pos_cum[-1] - pos_left
        p_left = pos_left / n_left
        p_right = pos_right / n_right
        weighted = (n_left * 2 * p_left * (1 - p_left) + n_right * 2 * p_right * (1 - p_right)) / n
        gains = parent - weighted
        i = int(np.argmax(gains))
        if gains[i] > best_gain:
            best_gain = float(gains[i])
            threshold = float((xs[boundaries[i]] + xs[boundaries[i] + 1]) / 2)
            best = (feature, threshold)
    return best


def _grow(X: np.ndarray, y: np.ndarray, depth: int, h: BaseLearner) -> _TreeNode:
    value = float(y.mean()) if len(y) else 0.0
    if depth >= h.max_depth or len(y) < 2 * h.min_leaf or y.min() == y.max():
        return _TreeNode(None, 0.0, None, None, value)
    split = _best_split(X, y, h.min_leaf)
    if split is None:
        return _TreeNode(None, 0.0, None, None, value)
    feature, threshold = split
    mask = X[:, feature] <= threshold
    return _TreeNode(
        feature=feature,
        threshold=threshold,
        left=_grow(X[mask], y[mask], depth + 1, h),
        right=_grow(X[~mask], y[~mask], depth + 1, h),
        value=value,
    )


@dataclass(frozen=True)
class DecisionTreeClassifier:
    root: _TreeNode

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        if X.ndim == 1:
            X = X.reshape(1, -1)
        out = np.empty(X.shape[0])
        for i, row in enumerate(X):
            node = self.root
            while node.feature is not None:
                node = node.left if row[node.feature] <= node.threshold else node.right
            out[i] = node.value
        return out

    def to_json(self) -> dict:
        return {"type": "tree", "root": self.root.to_json()}


def train_decision_tree(X: np.ndarray, y: np.ndarray, h: BaseLearner) -> DecisionTreeClassifier:
    if len(X) == 0 or len(X) != len(y):
        raise ValueError("need a non-empty matrix with matching targets")
    y = np.asarray(y, dtype=float)
    return DecisionTreeClassifier(root=_grow(X, y, 0, h))


def train_base(X: np.ndarray, y: np.ndarray, h: BaseLearner):
    if h.kind == "logistic_regression":
        return train_logistic(X, y, h)
    return train_decision_tree(X, y, h)


def classifier_from_json(data: dict):
    if data["type"] == "logistic":
        weights = tuple(data["weights"]) if data["weights"] is not None else None
        return LogisticClassifier(weights=weights, constant=data["constant"])
    return DecisionTreeClassifier(root=_TreeNode.from_json(data["root"]))
