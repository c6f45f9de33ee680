from __future__ import annotations

from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srmforge.dataset import TAXONOMY, LabelSet
from srmforge.features import (
    SchemaMismatch,
    default_schema,
    default_token_table,
    features_from_signature,
)
from srmforge.ml import (
    BaseLearner,
    DegenerateData,
    EmptyAfterPruning,
    FeatureTransform,
    LengthMismatch,
    ModelConfig,
    TooFewRows,
    TrainingMatrix,
    cross_validate,
    evaluate_metrics,
    f1_score,
    fit_logistic_weights,
    load_model,
    loss_and_gradient,
    model_search,
    predict_batch,
    predict_labels,
    prune_label_sets,
    save_model,
    search_grid,
    train_binary_relevance,
    train_decision_tree,
    train_ensemble_pruned_sets,
    train_logistic,
    train_model,
    train_pruned_sets,
)


@pytest.fixture(scope="module")
def schema():
    return default_schema()


@pytest.fixture(scope="module")
def tokens():
    return default_token_table()


def _labels(*names: str) -> LabelSet:
    return LabelSet.from_names(names)


_CORPUS = [
    ("a.Db.executeQuery(String)", ("sink", "cwe89")),
    ("a.Db.executeUpdate(String)", ("sink", "cwe89")),
    ("a.Db.prepareQuery(String)", ("sink", "cwe89")),
    ("a.Db.executeLargeQuery(String)", ("sink", "cwe89")),
    ("a.Web.getParameter(String)", ("source", "cwe89")),
    ("a.Web.getQueryString()", ("source", "cwe89")),
    ("a.Web.getParameterMap()", ("source", "cwe89")),
    ("a.Web.getHeader(String)", ("source", "cwe79")),
    ("a.Enc.encodeForSQL(Codec,String)", ("sanitizer", "cwe89")),
    ("a.Enc.encodeForHTML(String)", ("sanitizer", "cwe79")),
    ("a.Util.trim(String)", ()),
    ("a.Util.max(int,int)", ()),
]


@pytest.fixture(scope="module")
def matrix(schema, tokens):
    rows = [
        (features_from_signature(sig, schema, tokens), _labels(*names))
        for sig, names in _CORPUS
    ]
    return TrainingMatrix.from_pairs(rows, schema)


# -- logistic regression ------------------------------------------------------


def test_gradient_matches_finite_differences():
    """Analytic gradient vs central differences on random small problems."""
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(5):
        X = rng.normal(size=(12, 4))
        X = np.hstack([X, np.ones((12, 1))])
        y = rng.integers(0, 2, size=12).astype(float)
        w = rng.normal(scale=0.5, size=5)
        _, grad = loss_and_gradient(w, X, y, l2=0.01)
        eps = 1e-6
        for j in range(len(w)):
            bump = np.zeros_like(w)
            bump[j] = eps
            hi, _ = loss_and_gradient(w + bump, X, y, l2=0.01)
            lo, _ = loss_and_gradient(w - bump, X, y, l2=0.01)
            numeric = (hi - lo) / (2 * eps)
            rel = abs(grad[j] - numeric) / max(abs(numeric), 1e-8)
            worst = max(worst, rel)
    assert worst <= 1e-4


def test_training_loss_non_increasing():
    rng = np.random.default_rng(7)
    X = rng.normal(size=(30, 3))
    y = (X[:, 0] + 0.3 * rng.normal(size=30) > 0).astype(float)
    clf = train_logistic(X, y, BaseLearner(learning_rate=0.1, epochs=120))
    history = clf.loss_history
    assert len(history) == 120
    assert all(b <= a + 1e-12 for a, b in zip(history, history[1:]))


def test_separable_fixture_reaches_training_accuracy_one():
    X = np.array([[x, 0.0] for x in (-3.0, -2.5, -2.0, -1.5, 2.0, 2.5, 3.0, 3.5)])
    y = np.array([0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0])
    clf = train_logistic(X, y, BaseLearner(learning_rate=0.5, epochs=400, l2=0.0))
    predictions = (clf.predict_proba(X) >= 0.5).astype(float)
    assert (predictions == y).all()


def test_degenerate_targets_give_constant_classifier():
    X = np.ones((5, 2))
    all_pos = train_logistic(X, np.ones(5), BaseLearner())
    assert all_pos.constant == 1.0
    assert (all_pos.predict_proba(X) == 1.0).all()
    with pytest.raises(DegenerateData):
        fit_logistic_weights(X, np.zeros(5), BaseLearner())


def test_trainers_reject_empty_or_mismatched_input():
    with pytest.raises(ValueError):
        train_logistic(np.zeros((0, 2)), np.zeros(0), BaseLearner())
    with pytest.raises(ValueError):
        train_decision_tree(np.zeros((3, 2)), np.zeros(2), BaseLearner(kind="decision_tree"))


def test_base_learner_validates_hyperparameters():
    with pytest.raises(ValueError):
        BaseLearner(kind="nonsense")
    with pytest.raises(ValueError):
        BaseLearner(learning_rate=0.0)
    with pytest.raises(ValueError):
        BaseLearner(kind="decision_tree", max_depth=0)


# -- decision tree ------------------------------------------------------------


def test_tree_splits_a_simple_threshold():
    X = np.array([[0.0], [1.0], [2.0], [3.0], [10.0], [11.0], [12.0], [13.0]])
    y = np.array([0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0])
    tree = train_decision_tree(X, y, BaseLearner(kind="decision_tree"))
    assert (tree.predict_proba(X) == y).all()
    assert tree.root.feature == 0
    assert 3.0 < tree.root.threshold < 10.0


def test_tree_respects_min_leaf():
    X = np.arange(6, dtype=float).reshape(-1, 1)
    y = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
    tree = train_decision_tree(
        X, y, BaseLearner(kind="decision_tree", max_depth=4, min_leaf=2)
    )

    def leaves(node, count=0):
        if node.feature is None:
            return 1
        return leaves(node.left) + leaves(node.right)

    def smallest_leaf(node, X_part, y_part):
        if node.feature is None:
            return len(y_part)
        mask = X_part[:, node.feature] <= node.threshold
        return min(
            smallest_leaf(node.left, X_part[mask], y_part[mask]),
            smallest_leaf(node.right, X_part[~mask], y_part[~mask]),
        )

    assert smallest_leaf(tree.root, X, y) >= 2


# -- label-set pruning --------------------------------------------------------


def _oracle_prune(rows: list[frozenset], p: int):
    """Independent brute-force reference for the pruning contract."""
    counts = Counter(rows)
    frequent = {s for s, c in counts.items() if c > p}
    reassignment = {}
    for s in counts:
        if s in frequent:
            continue
        subs = [f for f in frequent if f < s]
        reassignment[s] = {f for f in subs if not any(f < g for g in subs)}
    return frequent, reassignment


def _as_frozen(labels: LabelSet) -> frozenset:
    return frozenset(labels.names())


def _check_against_oracle(rows: list[LabelSet], p: int):
    frequent, reassignment = prune_label_sets(rows, p)
    oracle_frequent, oracle_reassignment = _oracle_prune(
        [_as_frozen(r) for r in rows], p
    )
    assert {_as_frozen(f) for f in frequent} == oracle_frequent
    assert {
        _as_frozen(k): {_as_frozen(v) for v in vs} for k, vs in reassignment.items()
    } == oracle_reassignment


def test_prune_drops_sets_with_no_frequent_subset():
    ab, a, c = _labels("source", "sink"), _labels("source"), _labels("sanitizer")
    frequent, reassignment = prune_label_sets([ab, ab, ab, a, a, c], p=1)
    assert set(frequent) == {ab, a}
    assert reassignment == {c: []}


def test_prune_subset_direction():
    abc = _labels("source", "sink", "sanitizer")
    ab = _labels("source", "sink")
    ac = _labels("source", "sanitizer")
    frequent, reassignment = prune_label_sets([abc, abc, ab, ab, ac], p=1)
    assert set(frequent) == {abc, ab}
    assert reassignment == {ac: []}


def test_prune_reassigns_to_maximal_frequent_subsets():
    abc = _labels("source", "sink", "sanitizer")
    ab = _labels("source", "sink")
    a = _labels("source")
    frequent, reassignment = prune_label_sets([ab, ab, a, a, abc], p=1)
    # {A,B} and {A} are both frequent proper subsets of {A,B,C}; only the
    # maximal one ({A,B}) is kept.
    assert reassignment == {abc: [ab]}


def test_prune_p_zero_keeps_everything():
    rows = [_labels("source"), _labels("sink"), _labels("sink")]
    frequent, reassignment = prune_label_sets(rows, p=0)
    assert set(frequent) == set(rows)
    assert reassignment == {}


def test_prune_rejects_bad_input():
    with pytest.raises(ValueError):
        prune_label_sets([], 1)
    with pytest.raises(ValueError):
        prune_label_sets([_labels("source")], -1)


_THREE_LABELS = ["source", "sink", "sanitizer"]
_ALL_SUBSETS = [
    _labels(*[lab for j, lab in enumerate(_THREE_LABELS) if i >> j & 1])
    for i in range(8)
]


@settings(max_examples=300, deadline=None)
@given(
    rows=st.lists(st.sampled_from(_ALL_SUBSETS), min_size=1, max_size=8),
    p=st.integers(min_value=0, max_value=4),
)
def test_prune_matches_brute_force_oracle(rows, p):
    _check_against_oracle(rows, p)


# -- binary relevance ---------------------------------------------------------


def test_binary_relevance_matches_single_label_runs(matrix):
    base = BaseLearner()
    model = train_binary_relevance(matrix, base)
    raw = matrix.raw_matrix()
    transform = FeatureTransform.fit(raw, matrix.schema)
    X = transform.apply(raw)
    vectors = [v for v, _ in matrix.rows]
    composed = []
    for i in range(len(TAXONOMY)):
        y = np.array([1.0 if labels.bits[i] else 0.0 for labels in matrix.label_sets()])
        solo = train_logistic(X, y, base)
        composed.append(solo.predict_proba(X) >= 0.5)
    expected = np.column_stack(composed)
    predicted = np.array([
        [bool(b) for b in labels.bits] for labels, _ in predict_batch(model, vectors)
    ])
    assert (predicted == expected).all()


def test_binary_relevance_constant_label_predicts_zero(matrix):
    model = train_binary_relevance(matrix, BaseLearner())
    # cwe78 never occurs in the corpus fixture
    index = TAXONOMY.index("cwe78")
    for _, scores in predict_batch(model, [v for v, _ in matrix.rows]):
        assert scores[index] == 0.0


def test_binary_relevance_separable_labels_fit_training_data(matrix):
    model = train_binary_relevance(matrix, BaseLearner(epochs=600))
    predictions = [
        labels for labels, _ in predict_batch(model, [v for v, _ in matrix.rows])
    ]
    metrics = evaluate_metrics(predictions, matrix.label_sets())
    assert metrics.per_label["sink"].f1 == 1.0
    assert metrics.per_label["source"].f1 == 1.0


# -- pruned sets --------------------------------------------------------------


def test_pruned_sets_single_class(matrix, schema, tokens):
    rows = [
        (features_from_signature(sig, schema, tokens), _labels("sink", "cwe89"))
        for sig, _ in _CORPUS[:4]
    ]
    model = train_pruned_sets(
        TrainingMatrix.from_pairs(rows, schema), BaseLearner(), p=1
    )
    probe = features_from_signature("z.Zed.frob()", schema, tokens)
    labels, scores = predict_labels(model, probe)
    assert labels == _labels("sink", "cwe89")


def test_pruned_sets_expanded_row_count(matrix, schema):
    ab, a, c = _labels("source", "sink"), _labels("source"), _labels("sanitizer")
    vectors = [v for v, _ in matrix.rows][:6]
    rows = list(zip(vectors, [ab, ab, ab, a, a, c]))
    model = train_pruned_sets(
        TrainingMatrix.from_pairs(rows, matrix.schema), BaseLearner(), p=1
    )
    # 3×{A,B} and 2×{A} survive; the lone {C} is dropped
    assert model.core.expanded_rows == 5
    assert set(model.core.class_sets) == {ab, a}


def test_pruned_sets_closed_world(matrix, schema, tokens):
    model = train_pruned_sets(matrix, BaseLearner(), p=1)
    allowed = set(model.core.class_sets)
    probes = [v for v, _ in matrix.rows] + [
        features_from_signature("q.Q.quux(int)", schema, tokens)
    ]
    for labels, _ in predict_batch(model, probes):
        assert labels in allowed


def test_pruned_sets_raises_when_everything_pruned(matrix):
    with pytest.raises(EmptyAfterPruning):
        train_pruned_sets(matrix, BaseLearner(), p=len(matrix))


def test_pruned_sets_tie_breaks_to_smallest_class_id(schema, tokens):
    # identical feature rows split between two classes give both one-vs-rest
    # classifiers the same score; the lexicographically smaller bit pattern
    # must win ({sink} = 01... sorts before {source} = 10...)
    vector = features_from_signature("a.A.same()", schema, tokens)
    rows = [
        (vector, _labels("source")),
        (vector, _labels("source")),
        (vector, _labels("sink")),
        (vector, _labels("sink")),
    ]
    model = train_pruned_sets(
        TrainingMatrix.from_pairs(rows, schema),
        BaseLearner(kind="decision_tree"),
        p=1,
    )
    labels, _ = predict_labels(model, vector)
    assert labels == _labels("sink")


# -- ensembles ----------------------------------------------------------------


def test_ensemble_of_one_full_sample_equals_pruned_sets(matrix):
    base = BaseLearner()
    ps = train_pruned_sets(matrix, base, p=1)
    eps = train_ensemble_pruned_sets(
        matrix, base, p=1, m=1, sample_fraction=1.0, t=0.5, seed=3
    )
    vectors = [v for v, _ in matrix.rows]
    ps_labels = [labels for labels, _ in predict_batch(ps, vectors)]
    eps_labels = [labels for labels, _ in predict_batch(eps, vectors)]
    assert ps_labels == eps_labels


def _member_label_sets(model, vectors):
    raw = np.array([[float(v) for v in vec.values] for vec in vectors])
    transformed = model.transform.apply(raw)
    per_member = []
    for member in model.members:
        bits = member.predict_bits(transformed)
        per_member.append([
            LabelSet(bits=tuple(bool(b) for b in row)) for row in bits
        ])
    return per_member


@pytest.mark.parametrize("t,expected", [(0.0, "union"), (1.0, "intersection")])
def test_ensemble_vote_threshold_extremes(matrix, t, expected):
    model = train_ensemble_pruned_sets(
        matrix, BaseLearner(), p=0, m=5, sample_fraction=0.8, t=t, seed=11
    )
    vectors = [v for v, _ in matrix.rows]
    member_predictions = _member_label_sets(model, vectors)
    for row, (labels, _) in enumerate(predict_batch(model, vectors)):
        votes = [member[row] for member in member_predictions]
        if expected == "union":
            combined = [any(v.bits[i] for v in votes) for i in range(len(TAXONOMY))]
        else:
            combined = [all(v.bits[i] for v in votes) for i in range(len(TAXONOMY))]
        assert labels.bits == tuple(combined)


def test_ensemble_monotone_in_vote_threshold(matrix):
    vectors = [v for v, _ in matrix.rows]
    previous = None
    for t in (0.0, 0.3, 0.6, 1.0):
        model = train_ensemble_pruned_sets(
            matrix, BaseLearner(), p=0, m=5, sample_fraction=0.8, t=t, seed=11
        )
        current = [labels for labels, _ in predict_batch(model, vectors)]
        if previous is not None:
            for tighter, looser in zip(current, previous):
                assert all(not t_bit or l_bit for t_bit, l_bit in zip(tighter.bits, looser.bits))
        previous = current


def test_ensemble_deterministic_per_seed(matrix):
    vectors = [v for v, _ in matrix.rows]
    runs = [
        predict_batch(
            train_ensemble_pruned_sets(
                matrix, BaseLearner(), p=1, m=4, sample_fraction=0.7, t=0.5, seed=21
            ),
            vectors,
        )
        for _ in range(2)
    ]
    assert runs[0] == runs[1]


def test_ensemble_skips_failed_members_with_diagnostics(schema, tokens):
    vector = features_from_signature("a.A.one()", schema, tokens)
    # one duplicated label set among singletons: small subsamples often
    # contain no repeated set and prune to nothing
    rows = [
        (vector, _labels("source")),
        (vector, _labels("source")),
        (vector, _labels("sink")),
        (vector, _labels("sanitizer")),
        (vector, _labels("cwe79")),
        (vector, _labels("cwe89")),
    ]
    matrix6 = TrainingMatrix.from_pairs(rows, schema)
    model = train_ensemble_pruned_sets(
        matrix6, BaseLearner(), p=1, m=12, sample_fraction=0.5, t=0.5, seed=5
    )
    assert model.diagnostics, "expected at least one skipped member"
    assert len(model.members) + len(model.diagnostics) == 12


def test_ensemble_raises_when_all_members_fail(schema, tokens):
    vector = features_from_signature("a.A.one()", schema, tokens)
    rows = [
        (vector, _labels(name)) for name in ("source", "sink", "sanitizer", "cwe78")
    ]
    with pytest.raises(EmptyAfterPruning):
        train_ensemble_pruned_sets(
            TrainingMatrix.from_pairs(rows, schema),
            BaseLearner(),
            p=1,
            m=3,
            sample_fraction=1.0,
            t=0.5,
            seed=0,
        )


# -- prediction surface -------------------------------------------------------


def test_all_constant_zero_components_predict_empty_set(schema, tokens):
    vector = features_from_signature("a.A.blank()", schema, tokens)
    rows = [(vector, LabelSet()) for _ in range(4)]
    model = train_binary_relevance(TrainingMatrix.from_pairs(rows, schema), BaseLearner())
    labels, scores = predict_labels(model, vector)
    assert labels.is_empty()
    assert scores == (0.0,) * len(TAXONOMY)


def test_unanimous_ensemble_scores_one(matrix, schema, tokens):
    rows = [
        (features_from_signature(sig, schema, tokens), _labels("sink", "cwe89"))
        for sig, _ in _CORPUS[:5]
    ]
    model = train_ensemble_pruned_sets(
        TrainingMatrix.from_pairs(rows, schema),
        BaseLearner(),
        p=1,
        m=3,
        sample_fraction=0.8,
        t=0.5,
        seed=2,
    )
    labels, scores = predict_labels(model, rows[0][0])
    assert labels == _labels("sink", "cwe89")
    assert scores[TAXONOMY.index("sink")] == 1.0
    assert scores[TAXONOMY.index("cwe89")] == 1.0


def test_predict_rejects_schema_mismatch(matrix):
    model = train_binary_relevance(matrix, BaseLearner())
    vector, _ = matrix.rows[0]
    alien = type(vector)(schema_version="other", values=vector.values)
    with pytest.raises(SchemaMismatch):
        predict_labels(model, alien)


def test_model_json_round_trip(matrix, tmp_path):
    vectors = [v for v, _ in matrix.rows]
    models = [
        train_binary_relevance(matrix, BaseLearner()),
        train_pruned_sets(matrix, BaseLearner(kind="decision_tree"), p=1),
        train_ensemble_pruned_sets(
            matrix, BaseLearner(), p=1, m=3, sample_fraction=0.8, t=0.4, seed=9
        ),
    ]
    for model in models:
        path = tmp_path / f"{model.kind}.json"
        save_model(model, path)
        again = load_model(path)
        assert predict_batch(again, vectors) == predict_batch(model, vectors)
        assert again.config == model.config


# -- metrics ------------------------------------------------------------------


def test_f1_harmonic_mean_example():
    assert round(f1_score(0.90, 0.85), 2) == 0.87


def test_metrics_from_hand_confusion_counts():
    # six rows for label "sink": TP=3, FP=1, FN=2
    sink = _labels("sink")
    empty = LabelSet()
    predicted = [sink, sink, sink, sink, empty, empty]
    gold = [sink, sink, sink, empty, sink, sink]
    metrics = evaluate_metrics(predicted, gold)
    score = metrics.per_label["sink"]
    assert score.precision == 0.75
    assert score.recall == 0.6
    assert abs(score.f1 - 2 * 0.75 * 0.6 / 1.35) < 1e-12


def test_perfect_prediction_metrics(matrix):
    gold = matrix.label_sets()
    metrics = evaluate_metrics(gold, gold)
    assert metrics.macro_f1 == 1.0
    assert metrics.micro_f1 == 1.0
    assert metrics.subset_accuracy == 1.0
    assert metrics.hamming_loss == 0.0


def test_macro_ignores_labels_without_gold_positives():
    sink, source = _labels("sink"), _labels("source")
    # gold only ever uses "sink"; a false-positive "source" prediction must
    # not drag macro-F1 down via an unsupported label
    metrics = evaluate_metrics([sink, source], [sink, sink])
    assert metrics.per_label["source"].f1 == 0.0
    assert metrics.macro_f1 == metrics.per_label["sink"].f1


def test_zero_denominators_score_zero():
    empty = LabelSet()
    metrics = evaluate_metrics([empty], [empty])
    for score in metrics.per_label.values():
        assert score.precision == score.recall == score.f1 == 0.0
    assert metrics.subset_accuracy == 1.0
    assert metrics.hamming_loss == 0.0


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        evaluate_metrics([LabelSet()], [])


@settings(max_examples=100, deadline=None)
@given(
    pairs=st.lists(
        st.tuples(st.sampled_from(_ALL_SUBSETS), st.sampled_from(_ALL_SUBSETS)),
        min_size=1,
        max_size=10,
    )
)
def test_hamming_loss_symmetry(pairs):
    left = [a for a, _ in pairs]
    right = [b for _, b in pairs]
    assert (
        evaluate_metrics(left, right).hamming_loss
        == evaluate_metrics(right, left).hamming_loss
    )


# -- cross-validation ---------------------------------------------------------


def test_kfold_uses_every_row_once(matrix):
    config = ModelConfig(kind="binary_relevance", base=BaseLearner(epochs=50))
    report = cross_validate(matrix, config, k=2, seed=4)
    assert report.protocol == "kfold"
    assert len(report.folds) == 2
    # two folds of 6 over 12 rows: per-fold hamming denominators add to n
    total_cells = sum(
        score.true_positives + score.false_negatives
        for fold in report.folds
        for score in fold.per_label.values()
    )
    gold_positive_cells = sum(sum(labels.bits) for labels in matrix.label_sets())
    assert total_cells == gold_positive_cells


def test_cross_validation_deterministic(matrix):
    config = ModelConfig(kind="binary_relevance", base=BaseLearner(epochs=50))
    first = cross_validate(matrix, config, k=3, seed=8)
    second = cross_validate(matrix, config, k=3, seed=8)
    assert first.to_json() == second.to_json()


def test_holdout_protocol_runs_and_differs_from_kfold(matrix):
    config = ModelConfig(kind="binary_relevance", base=BaseLearner(epochs=50))
    report = cross_validate(matrix, config, k=3, seed=8, protocol="holdout")
    assert report.protocol == "holdout"
    assert len(report.folds) == 3
    for field in ("macro_f1", "micro_f1", "subset_accuracy", "hamming_loss"):
        assert 0.0 <= report.means[field] <= 1.0


def test_cross_validation_rejects_bad_requests(matrix):
    config = ModelConfig(kind="binary_relevance", base=BaseLearner())
    with pytest.raises(TooFewRows):
        cross_validate(matrix, config, k=len(matrix) + 1, seed=0)
    with pytest.raises(ValueError):
        cross_validate(matrix, config, k=1, seed=0)
    with pytest.raises(ValueError):
        cross_validate(matrix, config, k=2, seed=0, protocol="bootstrap")


# -- model search -------------------------------------------------------------


def test_search_grid_is_the_documented_space():
    grid = search_grid()
    assert len(grid) == 44
    ids = [config.config_id for config in grid]
    assert ids == sorted(ids)
    assert len(set(ids)) == 44
    kinds = Counter(config.kind for config in grid)
    assert kinds == {
        "binary_relevance": 2,
        "pruned_sets": 6,
        "ensemble_pruned_sets": 36,
    }


def test_model_search_budget_one(matrix):
    best, leaderboard = model_search(matrix, budget=1, seed=6)
    assert len(leaderboard) == 1
    assert leaderboard[0][0] == best


def test_model_search_deterministic_and_sorted(matrix):
    first = model_search(matrix, budget=5, seed=13)
    second = model_search(matrix, budget=5, seed=13)
    as_ids = lambda board: [(c.config_id, s) for c, s in board]  # noqa: E731
    assert as_ids(first[1]) == as_ids(second[1])
    scores = [s for _, s in first[1]]
    assert scores == sorted(scores, reverse=True)
    for (a_cfg, a_score), (b_cfg, b_score) in zip(first[1], first[1][1:]):
        if a_score == b_score:
            assert a_cfg.config_id < b_cfg.config_id


def test_model_search_rejects_zero_budget(matrix):
    with pytest.raises(ValueError):
        model_search(matrix, budget=0, seed=0)


# -- model dispatch & transform ----------------------------------------------


def test_train_model_dispatches_all_kinds(matrix):
    for kind in ("binary_relevance", "pruned_sets", "ensemble_pruned_sets"):
        config = ModelConfig(kind=kind, base=BaseLearner(), p=0, m=2)
        model = train_model(matrix, config, seed=1)
        assert model.kind == kind


def test_transform_standardizes_numeric_cells(matrix):
    raw = matrix.raw_matrix()
    transform = FeatureTransform.fit(raw, matrix.schema)
    X = transform.apply(raw)
    # column 5 is parameter_count, which varies across the fixture corpus
    column = X[:, 5]
    assert abs(column.mean()) < 1e-9
    assert abs(column.std() - 1.0) < 1e-9
    again = FeatureTransform.from_json(transform.to_json())
    assert (again.apply(raw) == X).all()


def test_config_ids_are_stable():
    base = BaseLearner(kind="decision_tree")
    assert ModelConfig(kind="binary_relevance", base=base).config_id == "br:decision_tree"
    assert ModelConfig(kind="pruned_sets", base=base, p=2).config_id == "ps:decision_tree:p2"
    assert (
        ModelConfig(kind="ensemble_pruned_sets", base=base, p=1, m=10, t=0.5).config_id
        == "eps:decision_tree:p1:m10:t0.5"
    )
