# External Imports
import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
import pytest
from sklearn.svm import LinearSVC

# Internal Imports
from dialectcxg.classify import (MAX_ITER, TOLERANCE, Dataset, LinearModel, evaluate, evaluate_labels,
                                 fit, predict, similarity_from_confusion, similarity_table, train)
from dialectcxg.errors import DegenerateData, EvaluationError, SpaceMismatch
from dialectcxg.features import FeatureSpace, FeatureVector
from dialectcxg.features._base import SpaceKind
from resources.builders import poisson_dataset

"""
Tests for classify.py: training, C selection, prediction, evaluation and
confusion-based similarity.

To run these tests, call "pytest -v" from the repository root.
"""

SPACE = FeatureSpace(SpaceKind.FUNCTION_WORDS, 10)


def separable(seed, n_per_class=40, k=2, dim=10):
    """Class ``k`` only uses its own block of columns"""

    rng = np.random.default_rng(seed)
    block = dim // k
    means = np.zeros((k, dim))
    for i in range(k):
        means[i, i * block:(i + 1) * block] = 20.0

    return poisson_dataset(rng, FeatureSpace(SpaceKind.FUNCTION_WORDS, dim), n_per_class, means)


def from_confusion(confusion, classes):
    """Label lists reproducing a confusion matrix (rows are the truth)"""

    y_true, y_pred = [], []
    for i, row in enumerate(confusion):
        for j, count in enumerate(row):
            y_true += [classes[i]] * count
            y_pred += [classes[j]] * count

    return y_true, y_pred


def test_separable_data_is_classified_perfectly() -> None:

    model = train(separable(1), separable(2, 10), c_grid=(1.0, 2.0, 10.0))
    report = evaluate(model, separable(3, 25))

    assert model.classes == ('C00', 'C01')
    assert report.accuracy == 1.0
    assert report.f1 == 1.0
    # Every C scores 1.0 on dev, so the smallest wins
    assert model.C == 1.0
    assert model.tuning == {1.0: 1.0, 2.0: 1.0, 10.0: 1.0}


def test_multiclass_separable() -> None:

    model = train(separable(4, k=5), separable(5, 10, k=5), c_grid=(1.0,))
    report = evaluate(model, separable(6, 20, k=5))

    assert model.weights.shape == (5, 10)
    assert report.accuracy == 1.0


def test_degenerate_training_data() -> None:

    data = separable(1)
    one_class = Dataset(data.X[:40], data.y[:40], data.space)

    with pytest.raises(DegenerateData):
        fit(one_class, 1.0)
    with pytest.raises(DegenerateData):
        fit(data, 1.0, classes=('C00', 'C01', 'C02'))
    with pytest.raises(DegenerateData):
        train(data, None, c_grid=(0.1, 1.0))
    with pytest.raises(DegenerateData):
        Dataset(data.X, data.y[:-1], data.space)
    with pytest.raises(ValueError):
        train(data, data, c_grid=(0.0, 1.0))

    # A single candidate needs no development data
    assert train(data, None, c_grid=(0.5,)).C == 0.5


def test_binary_model_matches_plain_svm() -> None:
    """A two-class model is the binary hinge-loss solution on both sides"""

    data = separable(7)
    model = fit(data, 0.5, seed=3)

    svm = LinearSVC(C=0.5, loss='hinge', dual=True, tol=TOLERANCE, max_iter=MAX_ITER,
                    random_state=3).fit(data.X, list(data.y))

    assert_allclose(model.weights[1], svm.coef_[0], rtol=1e-9, atol=1e-12)
    assert_allclose(model.weights[0], -svm.coef_[0], rtol=1e-9, atol=1e-12)
    assert_allclose(model.bias, [-svm.intercept_[0], svm.intercept_[0]], rtol=1e-9, atol=1e-12)


def test_training_is_deterministic() -> None:

    a = train(separable(8, k=3), separable(9, 10, k=3), c_grid=(0.1, 1.0), seed=5)
    b = train(separable(8, k=3), separable(9, 10, k=3), c_grid=(0.1, 1.0), seed=5)

    assert a.to_dict() == b.to_dict()


def test_predict_ties_and_spaces() -> None:

    model = LinearModel(('A', 'B'), np.zeros((2, 10)), np.array([0.5, -0.1]), SPACE, 1.0)
    assert predict(model, FeatureVector(SPACE, {})) == 'A'

    tied = LinearModel(('A', 'B', 'C'), np.zeros((3, 10)), np.zeros(3), SPACE, 1.0)
    assert predict(tied, FeatureVector(SPACE, {3: 4})) == 'A'

    weighted = LinearModel(('A', 'B'), np.vstack([np.zeros(10), np.eye(10)[3]]), np.zeros(2), SPACE, 1.0)
    assert predict(weighted, FeatureVector(SPACE, {3: 1})) == 'B'

    other = FeatureSpace(SpaceKind.HASH_NGRAM, 10, n=1)
    with pytest.raises(SpaceMismatch):
        predict(model, FeatureVector(other, {}))
    with pytest.raises(SpaceMismatch):
        evaluate(model, Dataset(np.zeros((1, 10)), ['A'], other))


def test_predict_is_scale_consistent() -> None:
    """Scaling every count by a positive constant, with weights divided by the
    same constant, picks the same region"""

    rng = np.random.default_rng(21)
    classes = ('A', 'B', 'C', 'D')
    for _ in range(100):
        weights, bias = rng.normal(size=(4, 10)), rng.normal(size=4)
        counts = rng.integers(0, 20, size=10)
        model = LinearModel(classes, weights, bias, SPACE, 1.0)
        unbiased = LinearModel(classes, weights, np.zeros(4), SPACE, 1.0)
        vector = FeatureVector.from_counts(SPACE, counts)

        for alpha in (2, 4, 8):
            scaled = FeatureVector.from_counts(SPACE, counts * alpha)
            rescaled = LinearModel(classes, weights / alpha, bias, SPACE, 1.0)

            assert predict(rescaled, scaled) == predict(model, vector)
            assert predict(unbiased, scaled) == predict(unbiased, vector)


def test_model_file_roundtrip(tmp_path) -> None:

    model = train(separable(10), separable(11, 10), c_grid=(0.1, 1.0))
    path = tmp_path / 'model.json'
    model.to_file(path)
    loaded = LinearModel.from_file(path)

    assert loaded.classes == model.classes
    assert loaded.space == model.space
    assert loaded.C == model.C
    assert loaded.tuning == model.tuning
    assert_array_equal(loaded.weights, model.weights)
    assert_array_equal(loaded.bias, model.bias)


def test_evaluate_hand_computed() -> None:

    classes = ('A', 'B', 'C')
    confusion = [[8, 1, 1], [2, 7, 1], [0, 2, 8]]
    report = evaluate_labels(*from_confusion(confusion, classes), classes)

    assert_array_equal(report.confusion, confusion)
    assert_allclose(report.per_class['A'], (0.8, 0.8, 0.8), atol=1e-9)
    assert_allclose(report.per_class['B'], (0.7, 0.7, 0.7), atol=1e-9)
    assert_allclose(report.per_class['C'], (0.8, 0.8, 0.8), atol=1e-9)
    assert_allclose(report.weighted, (2.3 / 3, 2.3 / 3, 2.3 / 3), atol=1e-9)
    assert report.support == {'A': 10, 'B': 10, 'C': 10}
    assert_allclose(report.accuracy, 23 / 30)


def test_evaluate_unbalanced_weights() -> None:

    classes = ('A', 'B')
    report = evaluate_labels(*from_confusion([[5, 0], [5, 10]], classes), classes)

    assert_allclose(report.per_class['A'], (0.5, 1.0, 2 / 3), atol=1e-9)
    assert_allclose(report.per_class['B'], (1.0, 2 / 3, 0.8), atol=1e-9)
    assert_allclose(report.weighted, (0.875, 0.75, (5 * 2 / 3 + 15 * 0.8) / 20), atol=1e-9)


def test_evaluate_extremes() -> None:

    classes = ('A', 'B')
    perfect = evaluate_labels(['A', 'B', 'B'], ['A', 'B', 'B'], classes)
    assert perfect.weighted == (1.0, 1.0, 1.0)

    wrong = evaluate_labels(['A', 'B', 'B'], ['B', 'A', 'A'], classes)
    assert wrong.weighted == (0.0, 0.0, 0.0)
    assert wrong.accuracy == 0.0

    with pytest.raises(EvaluationError):
        evaluate_labels([], [], classes)
    with pytest.raises(EvaluationError):
        evaluate_labels(['A', 'Z'], ['A', 'A'], classes)


def test_report_tables(tmp_path) -> None:

    classes = ('A', 'B', 'C')
    report = evaluate_labels(*from_confusion([[8, 1, 1], [2, 7, 1], [0, 2, 8]], classes), classes)
    frame = report.to_frame()

    assert list(frame.columns) == ['country', 'precision', 'recall', 'f1', 'support']
    assert frame['country'].tolist() == ['A', 'B', 'C', 'w. avg']
    assert frame['support'].tolist() == [10, 10, 10, 30]

    report.write(tmp_path / 'report')
    for suffix in ('.json', '.csv', '_confusion.csv'):
        assert (tmp_path / f'report{suffix}').exists()


def test_similarity_from_confusion() -> None:

    assert set(similarity_from_confusion(np.diag([5, 6, 7])).values()) == {0}

    similarity = similarity_from_confusion([[300, 120], [101, 250]], ['CA', 'US'])
    assert similarity == {('CA', 'US'): 221}

    with pytest.raises(ValueError):
        similarity_from_confusion(np.zeros((2, 3)))


def test_similarity_matches_brute_force() -> None:

    rng = np.random.default_rng(12)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        confusion = rng.integers(0, 100, size=(n, n))
        similarity = similarity_from_confusion(confusion)

        assert len(similarity) == n * (n - 1) // 2
        for (a, b), count in similarity.items():
            assert a < b
            assert count == confusion[a][b] + confusion[b][a]
            assert count == similarity_from_confusion(confusion.T)[(a, b)]


def test_similarity_table_order() -> None:

    table = similarity_table({('A', 'B'): 3, ('A', 'C'): 9, ('B', 'C'): 3})

    assert table['confusions'].tolist() == [9, 3, 3]
    assert table[['variety_a', 'variety_b']].values.tolist() == [['A', 'C'], ['A', 'B'], ['B', 'C']]
