"""Multi-label evaluation metrics over fixed-width label sets."""

from __future__ import annotations

from dataclasses import dataclass

from ..dataset import TAXONOMY, LabelSet


class LengthMismatch(Exception):
    """Prediction and gold sequences have different lengths."""


@dataclass(frozen=True)
class LabelScore:
    """Precision/recall/F1 for one label, 0.0 whenever a denominator is 0."""

    precision: float
    recall: float
    f1: float
    true_positives: int
    false_positives: int
    false_negatives: int


@dataclass(frozen=True)
class Metrics:
    """Aggregate quality of a batch of multi-label predictions."""

    per_label: dict[str, LabelScore]
    macro_f1: float
    micro_f1: float
    subset_accuracy: float
    hamming_loss: float

    def to_json(self) -> dict:
        return {
            "macro_f1": self.macro_f1,
            "micro_f1": self.micro_f1,
            "subset_accuracy": self.subset_accuracy,
            "hamming_loss": self.hamming_loss,
            "per_label": {
                name: {
                    "precision": score.precision,
                    "recall": score.recall,
                    "f1": score.f1,
                    "tp": score.true_positives,
                    "fp": score.false_positives,
                    "fn": score.false_negatives,
                }
                for name, score in self.per_label.items()
            },
        }


def f1_score(precision: float, recall: float) -> float:
    """Harmonic mean, 0.0 when both inputs are 0."""
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _score_counts(tp: int, fp: int, fn: int) -> LabelScore:
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return LabelScore(precision, recall, f1_score(precision, recall), tp, fp, fn)


def evaluate_metrics(predicted: list[LabelSet], gold: list[LabelSet]) -> Metrics:
    """Score predictions against gold labels.

    macro_f1 averages per-label F1 over labels that have at least one gold
    positive (labels absent from the gold data carry no signal); micro_f1
    pools true/false positives and negatives across all labels. Empty input
    yields all-zero metrics with hamming_loss 0.
    """
    if len(predicted) != len(gold):
        raise LengthMismatch(
            f"{len(predicted)} predictions for {len(gold)} gold rows"
        )
    width = len(TAXONOMY)
    tp = [0] * width
    fp = [0] * width
    fn = [0] * width
    exact = 0
    wrong_cells = 0
    for pred, truth in zip(predicted, gold):
        if pred.bits == truth.bits:
            exact += 1
        for i in range(width):
            p, g = pred.bits[i], truth.bits[i]
            if p and g:
                tp[i] += 1
            elif p and not g:
                fp[i] += 1
            elif g and not p:
                fn[i] += 1
            if p != g:
                wrong_cells += 1

    per_label = {
        name: _score_counts(tp[i], fp[i], fn[i]) for i, name in enumerate(TAXONOMY)
    }
    supported = [
        per_label[name].f1
        for i, name in enumerate(TAXONOMY)
        if tp[i] + fn[i] > 0
    ]
    macro_f1 = sum(supported) / len(supported) if supported else 0.0

    pooled = _score_counts(sum(tp), sum(fp), sum(fn))
    n = len(gold)
    return Metrics(
        per_label=per_label,
        macro_f1=macro_f1,
        micro_f1=pooled.f1,
        subset_accuracy=exact / n if n else 0.0,
        hamming_loss=wrong_cells / (n * width) if n else 0.0,
    )
