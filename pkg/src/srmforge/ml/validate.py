"""Cross-validation protocols and a bounded deterministic model search."""

from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass

from .learners import BaseLearner
from .metrics import Metrics, evaluate_metrics
from .models import (
    EmptyAfterPruning,
    ModelConfig,
    TrainingMatrix,
    predict_batch,
    train_model,
)

PROTOCOLS = ("kfold", "holdout")
SUMMARY_FIELDS = ("macro_f1", "micro_f1", "subset_accuracy", "hamming_loss")


class TooFewRows(Exception):
    """Not enough rows to form the requested folds."""


@dataclass(frozen=True)
class CrossValidationReport:
    """Per-fold metrics plus mean/stdev aggregates for the summary fields."""

    protocol: str
    folds: tuple[Metrics, ...]

    @property
    def means(self) -> dict[str, float]:
        return {
            field: statistics.fmean(getattr(fold, field) for fold in self.folds)
            for field in SUMMARY_FIELDS
        }

    @property
    def stdevs(self) -> dict[str, float]:
        return {
            field: statistics.pstdev(getattr(fold, field) for fold in self.folds)
            for field in SUMMARY_FIELDS
        }

    def per_label_mean_f1(self) -> dict[str, float]:
        labels = self.folds[0].per_label.keys()
        return {
            label: statistics.fmean(fold.per_label[label].f1 for fold in self.folds)
            for label in labels
        }

    def to_json(self) -> dict:
        return {
            "protocol": self.protocol,
            "fold_count": len(self.folds),
            "mean": self.means,
            "stdev": self.stdevs,
            "per_label_mean_f1": self.per_label_mean_f1(),
        }


def _train_test_metrics(
    matrix: TrainingMatrix,
    config: ModelConfig,
    train_idx: list[int],
    test_idx: list[int],
    seed: int,
) -> Metrics:
    model = train_model(matrix.subset(train_idx), config, seed=seed)
    test = matrix.subset(test_idx)
    predictions = [labels for labels, _ in predict_batch(model, [v for v, _ in test.rows])]
    return evaluate_metrics(predictions, test.label_sets())


def _holdout_split(n: int, fraction: float, rng: random.Random) -> tuple[list[int], list[int]]:
    order = list(range(n))
    rng.shuffle(order)
    cut = min(math.ceil(n * fraction), n - 1)
    return sorted(order[:cut]), sorted(order[cut:])


def cross_validate(
    matrix: TrainingMatrix,
    config: ModelConfig,
    k: int,
    seed: int = 0,
    protocol: str = "kfold",
) -> CrossValidationReport:
    """Estimate model quality with one of two resampling protocols.

    ``kfold`` shuffles once and tests every row exactly once across k
    balanced folds; ``holdout`` repeats k independent seeded 70:30 splits.
    Both are pure functions of (data, config, k, seed).
    """
    if protocol not in PROTOCOLS:
        raise ValueError(f"unknown protocol {protocol!r}; expected one of {PROTOCOLS}")
    if k < 2:
        raise ValueError("need at least 2 folds/repeats")
    n = len(matrix)
    if n < k or n < 2:
        raise TooFewRows(f"{n} rows cannot support k={k} {protocol}")
    rng = random.Random(seed)
    folds: list[Metrics] = []
    if protocol == "kfold":
        order = list(range(n))
        rng.shuffle(order)
        fold_seeds = [rng.randrange(2**31) for _ in range(k)]
        base, extra = divmod(n, k)
        start = 0
        for i in range(k):
            size = base + (1 if i < extra else 0)
            test_idx = sorted(order[start : start + size])
            start += size
            train_idx = sorted(set(range(n)) - set(test_idx))
            folds.append(
                _train_test_metrics(matrix, config, train_idx, test_idx, fold_seeds[i])
            )
    else:
        for i in range(k):
            train_idx, test_idx = _holdout_split(n, 0.7, rng)
            repeat_seed = rng.randrange(2**31)
            folds.append(
                _train_test_metrics(matrix, config, train_idx, test_idx, repeat_seed)
            )
    return CrossValidationReport(protocol=protocol, folds=tuple(folds))


def search_grid() -> list[ModelConfig]:
    """The fixed 44-point search space, ordered by config id."""
    configs: list[ModelConfig] = []
    for base_kind in ("logistic_regression", "decision_tree"):
        base = BaseLearner(kind=base_kind)
        configs.append(ModelConfig(kind="binary_relevance", base=base))
        for p in (0, 1, 2):
            configs.append(ModelConfig(kind="pruned_sets", base=base, p=p))
            for m in (5, 10):
                for t in (0.4, 0.5, 0.6):
                    configs.append(
                        ModelConfig(
                            kind="ensemble_pruned_sets", base=base, p=p, m=m, t=t
                        )
                    )
    return sorted(configs, key=lambda c: c.config_id)


def model_search(
    matrix: TrainingMatrix, budget: int, seed: int = 0
) -> tuple[ModelConfig, list[tuple[ModelConfig, float]]]:
    """Evaluate up to ``budget`` grid points on a seeded 70:30 split.

    Returns the winning config and the full leaderboard sorted by held-out
    macro-F1 (descending), ties broken by config id. Candidates that cannot
    train (e.g. pruning removes everything) score 0.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    n = len(matrix)
    if n < 2:
        raise TooFewRows(f"{n} rows cannot support a 70:30 search split")
    rng = random.Random(seed)
    candidates = search_grid()
    rng.shuffle(candidates)
    candidates = candidates[:budget]
    train_idx, test_idx = _holdout_split(n, 0.7, rng)
    train_seed = rng.randrange(2**31)
    leaderboard: list[tuple[ModelConfig, float]] = []
    for config in candidates:
        try:
            metrics = _train_test_metrics(matrix, config, train_idx, test_idx, train_seed)
            score = metrics.macro_f1
        except (EmptyAfterPruning, ValueError):
            score = 0.0
        leaderboard.append((config, score))
    leaderboard.sort(key=lambda item: (-item[1], item[0].config_id))
    return leaderboard[0][0], leaderboard
