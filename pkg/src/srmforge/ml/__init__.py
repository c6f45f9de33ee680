"""Multi-label learning over method feature vectors.

Submodules: transforms (standardization/one-hot), learners (binary base
classifiers), models (Binary Relevance, Pruned Sets, ensembles), metrics,
and validate (cross-validation, model search).
"""

from .learners import (
    BaseLearner,
    DecisionTreeClassifier,
    DegenerateData,
    LogisticClassifier,
    classifier_from_json,
    fit_logistic_weights,
    loss_and_gradient,
    train_base,
    train_decision_tree,
    train_logistic,
)
from .metrics import LabelScore, LengthMismatch, Metrics, evaluate_metrics, f1_score
from .models import (
    EmptyAfterPruning,
    ModelConfig,
    MultiLabelModel,
    PrunedSetsCore,
    TrainingMatrix,
    load_model,
    predict_batch,
    predict_labels,
    prune_label_sets,
    save_model,
    train_binary_relevance,
    train_ensemble_pruned_sets,
    train_model,
    train_pruned_sets,
)
from .transforms import FeatureTransform
from .validate import (
    CrossValidationReport,
    TooFewRows,
    cross_validate,
    model_search,
    search_grid,
)

__all__ = [
    "BaseLearner",
    "CrossValidationReport",
    "DecisionTreeClassifier",
    "DegenerateData",
    "EmptyAfterPruning",
    "FeatureTransform",
    "LabelScore",
    "LengthMismatch",
    "LogisticClassifier",
    "Metrics",
    "ModelConfig",
    "MultiLabelModel",
    "PrunedSetsCore",
    "TooFewRows",
    "TrainingMatrix",
    "classifier_from_json",
    "cross_validate",
    "evaluate_metrics",
    "f1_score",
    "fit_logistic_weights",
    "load_model",
    "loss_and_gradient",
    "model_search",
    "predict_batch",
    "predict_labels",
    "prune_label_sets",
    "save_model",
    "search_grid",
    "train_base",
    "train_binary_relevance",
    "train_decision_tree",
    "train_ensemble_pruned_sets",
    "train_logistic",
    "train_model",
    "train_pruned_sets",
]
