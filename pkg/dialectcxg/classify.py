"""
Linear max-margin classification of national varieties: training with
dev-tuned regularization, prediction, evaluation and confusion-based
similarity between varieties
"""

# Core imports
from __future__ import annotations
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

# Internal imports
from . import io
from ._version import __version__
from .errors import DegenerateData, EvaluationError, SpaceMismatch
from .features import FeatureSpace, FeatureVector, stack
from .warnings import NonConvergenceWarning

# External imports
import numpy as np
import pandas as pd
from scipy import sparse
from sklearn.exceptions import ConvergenceWarning
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support
from sklearn.multiclass import OneVsRestClassifier
from sklearn.svm import LinearSVC

DEFAULT_C_GRID = (0.01, 0.1, 1.0, 10.0)
TOLERANCE = 1e-4
MAX_ITER = 1000
MODEL_FORMAT = 1


@dataclass
class Dataset:
    """Labeled feature matrix of one feature space.

    Parameters
    ----------
    X : scipy.sparse.csr_matrix
        Shape (n, space.dim)
    y : np.ndarray
        Region labels, length n
    space : FeatureSpace
        Space of the rows
    sample_ids : tuple[str, ...], optional
        Row identifiers. Defaults to empty.
    """

    X: sparse.csr_matrix
    y: np.ndarray
    space: FeatureSpace
    sample_ids: tuple = field(default=())

    def __post_init__(self):

        self.X = sparse.csr_matrix(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=object)
        if self.X.shape[0] != len(self.y):
            raise DegenerateData(DegenerateData.mismatched.format(
                rows=self.X.shape[0], labels=len(self.y)))
        if self.X.shape[1] != self.space.dim:
            raise SpaceMismatch(SpaceMismatch.different.format(
                got=f'dim {self.X.shape[1]}', expected=self.space))

    def __len__(self):

        return len(self.y)

    @classmethod
    def from_vectors(cls, vectors: Sequence[FeatureVector], labels: Sequence[str],
                     space: FeatureSpace = None, sample_ids: Sequence[str] = ()) -> Dataset:

        space = space or vectors[0].space
        return cls(stack(vectors, space), np.asarray(labels, dtype=object), space, tuple(sample_ids))

    @classmethod
    def concat(cls, datasets: Sequence[Dataset]) -> Dataset:
        """Row-wise union of datasets from the same space"""

        space = datasets[0].space
        for d in datasets:
            if d.space != space:
                raise SpaceMismatch(SpaceMismatch.different.format(got=d.space, expected=space))

        return cls(sparse.vstack([d.X for d in datasets], format='csr'),
                   np.concatenate([d.y for d in datasets]), space,
                   tuple(i for d in datasets for i in d.sample_ids))

    def masked(self, mask: np.ndarray) -> Dataset:
        """Copy with the columns where ``mask`` is False zeroed out"""

        return Dataset(mask_features(self.X, mask), self.y, self.space, self.sample_ids)


def mask_features(X: sparse.spmatrix, mask: np.ndarray) -> sparse.csr_matrix:
    """Zero the columns of ``X`` where ``mask`` is False, keeping the shape"""

    return sparse.csr_matrix(X @ sparse.diags(np.asarray(mask, dtype=np.float64)))


class LinearModel:
    """One-vs-rest linear classifier over a fixed feature space.

    Parameters
    ----------
    classes : Sequence[str]
        Region labels in model order
    weights : np.ndarray
        Shape (len(classes), space.dim)
    bias : np.ndarray
        Shape (len(classes),)
    space : FeatureSpace
        Space the model accepts
    C : float
        Regularization the model was fitted with
    """

    def __init__(self, classes: Sequence[str], weights: np.ndarray, bias: np.ndarray,
                 space: FeatureSpace, C: float):

        self.classes = tuple(classes)
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = np.asarray(bias, dtype=np.float64)
        self.space = space
        self.C = float(C)

        if self.weights.shape != (len(self.classes), space.dim):
            raise ValueError(f'Weights have shape {self.weights.shape}, expected '
                             f'({len(self.classes)}, {space.dim})')
        if self.bias.shape != (len(self.classes),):
            raise ValueError(f'Bias has shape {self.bias.shape}, expected ({len(self.classes)},)')

        # Dev-set weighted F1 per C, filled in by ``train``
        self.tuning: dict[float, float] = {}

    def decision_function(self, X) -> np.ndarray:
        """Class scores ``w_k . x + b_k`` of shape (n, len(classes))"""

        return np.asarray(X @ self.weights.T) + self.bias

    def predict_matrix(self, X) -> np.ndarray:
        """Labels for every row; ties go to the earliest class"""

        scores = self.decision_function(X)
        return np.asarray(self.classes, dtype=object)[np.argmax(scores, axis=1)]

    def check_space(self, space: FeatureSpace) -> None:

        if space != self.space:
            raise SpaceMismatch(SpaceMismatch.different.format(got=space, expected=self.space))

    def to_dict(self) -> dict:

        return {
            'format': MODEL_FORMAT,
            'dialectcxg_version': __version__,
            'classes': list(self.classes),
            'space': str(self.space),
            'dim': self.space.dim,
            'C': self.C,
            'weights': self.weights.tolist(),
            'bias': self.bias.tolist(),
            'tuning': {repr(c): f1 for c, f1 in sorted(self.tuning.items())},
        }

    @classmethod
    def from_dict(cls, model_dict: dict) -> LinearModel:

        if model_dict.get('format') != MODEL_FORMAT:
            raise ValueError(f'Unsupported model format {model_dict.get("format")}')

        model = cls(model_dict['classes'], np.asarray(model_dict['weights']),
                    np.asarray(model_dict['bias']), FeatureSpace.parse(model_dict['space']),
                    model_dict['C'])
        model.tuning = {float(c): f1 for c, f1 in model_dict.get('tuning', {}).items()}

        return model

    def to_file(self, path: io.PathLike) -> None:

        io.write_json(self.to_dict(), path)

    @classmethod
    def from_file(cls, path: io.PathLike) -> LinearModel:

        return cls.from_dict(io.read_json(path))


def fit(data: Dataset, C: float, classes: Sequence[str] = None, seed: int = 0,
        jobs: int = 1) -> LinearModel:
    """Fit one-vs-rest L2-regularized hinge-loss classifiers at a fixed C

    Parameters
    ----------
    data : Dataset
        Training data
    C : float
        Regularization strength (larger is weaker)
    classes : Sequence[str], optional
        Model class order. Defaults to the sorted training labels.
    seed : int, optional
        Solver seed. Defaults to 0.
    jobs : int, optional
        Per-class fits run in parallel when above 1. Defaults to 1.

    Returns
    -------
    LinearModel
        Fitted model

    Raises
    ------
    DegenerateData
        If fewer than two classes are present or a class has no samples
    """

    present = sorted(set(data.y))
    classes = tuple(classes) if classes is not None else tuple(present)
    if len(classes) < 2:
        raise DegenerateData(DegenerateData.too_few_classes.format(n=len(classes)))
    for label in classes:
        if label not in present:
            raise DegenerateData(DegenerateData.missing_class.format(label=label))

    estimator = LinearSVC(C=C, loss='hinge', dual=True, tol=TOLERANCE,
                          max_iter=MAX_ITER, random_state=seed)

    # Relabel to class positions so the model order is the one requested
    position = {label: i for i, label in enumerate(classes)}
    y = np.array([position[label] for label in data.y])

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', ConvergenceWarning)
        ovr = OneVsRestClassifier(estimator, n_jobs=jobs).fit(data.X, y)

    if any(np.max(e.n_iter_) >= MAX_ITER for e in ovr.estimators_):
        warnings.warn(NonConvergenceWarning(
            NonConvergenceWarning.max_iter.format(C=C, max_iter=MAX_ITER)))

    if len(classes) == 2:
        # A single binary problem: class 1 is the positive side
        w = ovr.estimators_[0].coef_[0]
        b = ovr.estimators_[0].intercept_[0]
        weights = np.vstack([-w, w])
        bias = np.array([-b, b])
    else:
        weights = np.vstack([e.coef_[0] for e in ovr.estimators_])
        bias = np.array([e.intercept_[0] for e in ovr.estimators_])

    return LinearModel(classes, weights, bias, data.space, C)


def train(data: Dataset, dev: Optional[Dataset], c_grid: Sequence[float] = DEFAULT_C_GRID,
          seed: int = 0, jobs: int = 1) -> LinearModel:
    """Fit a model for each C and keep the one with the best dev weighted F1

    Parameters
    ----------
    data : Dataset
        Training data; every class must be present
    dev : Dataset, optional
        Development data used to choose C. May be None when the grid has a
        single value.
    c_grid : Sequence[float], optional
        Candidate C values. Defaults to (0.01, 0.1, 1, 10).
    seed : int, optional
        Solver seed. Defaults to 0.
    jobs : int, optional
        Parallel per-class fits. Defaults to 1.

    Returns
    -------
    LinearModel
        Selected model, ties going to the smallest C, with ``tuning`` filled in
    """

    grid = sorted(set(float(c) for c in c_grid))
    if not grid or any(c <= 0 for c in grid):
        raise ValueError(f'C grid must hold positive values, got {list(c_grid)}')

    if len(grid) == 1 and dev is None:
        return fit(data, grid[0], seed=seed, jobs=jobs)
    if dev is None or len(dev) == 0:
        raise DegenerateData(DegenerateData.empty_dev)

    best, best_f1, tuning = None, -1.0, {}
    for C in grid:
        model = fit(data, C, seed=seed, jobs=jobs)
        f1 = evaluate(model, dev).weighted[2]
        tuning[C] = f1
        if f1 > best_f1:
            best, best_f1 = model, f1

    best.tuning = tuning

    return best


def predict(model: LinearModel, vector: FeatureVector) -> str:
    """Region with the highest score; ties go to the earliest class

    Raises
    ------
    SpaceMismatch
        If the vector is not from the model's space
    """

    model.check_space(vector.space)
    scores = model.weights @ vector.to_dense() + model.bias

    return model.classes[int(np.argmax(scores))]


@dataclass
class EvalReport:
    """Per-class and support-weighted precision, recall and F1.

    Attributes
    ----------
    classes : tuple[str, ...]
        Class order of ``confusion`` (rows are the truth)
    per_class : dict[str, tuple[float, float, float]]
        Region to (precision, recall, F1)
    support : dict[str, int]
        Region to number of test samples
    weighted : tuple[float, float, float]
        Support-weighted (precision, recall, F1)
    confusion : np.ndarray
        Count matrix
    """

    classes: tuple
    per_class: dict
    support: dict
    weighted: tuple
    confusion: np.ndarray

    @property
    def accuracy(self) -> float:

        return float(np.trace(self.confusion) / self.confusion.sum())

    @property
    def f1(self) -> float:

        return self.weighted[2]

    def to_frame(self) -> pd.DataFrame:
        """One row per class plus the weighted-average row ("w. avg")"""

        rows = [(c, *self.per_class[c], self.support[c]) for c in self.classes]
        rows.append(('w. avg', *self.weighted, int(sum(self.support.values()))))

        return pd.DataFrame(rows, columns=['country', 'precision', 'recall', 'f1', 'support'])

    def confusion_frame(self) -> pd.DataFrame:

        frame = pd.DataFrame(self.confusion, index=list(self.classes), columns=list(self.classes))
        frame.index.name = 'truth'

        return frame.reset_index()

    def to_dict(self) -> dict:

        return {
            'classes': list(self.classes),
            'per_class': {c: dict(zip(('precision', 'recall', 'f1'), v))
                          for c, v in self.per_class.items()},
            'support': dict(self.support),
            'weighted': dict(zip(('precision', 'recall', 'f1'), self.weighted)),
            'confusion': self.confusion.tolist(),
        }

    def write(self, stem: io.PathLike) -> None:
        """Write ``<stem>.json``, ``<stem>.csv`` and ``<stem>_confusion.csv``"""

        stem = str(stem)
        io.write_json(self.to_dict(), f'{stem}.json')
        io.write_frame(self.to_frame(), f'{stem}.csv')
        io.write_frame(self.confusion_frame(), f'{stem}_confusion.csv')


def evaluate_labels(y_true: Sequence[str], y_pred: Sequence[str],
                    classes: Sequence[str]) -> EvalReport:
    """Metrics from true and predicted labels; undefined ratios count as 0

    Parameters
    ----------
    y_true, y_pred : Sequence[str]
        Labels
    classes : Sequence[str]
        Label order for the confusion matrix

    Returns
    -------
    EvalReport
        The report
    """

    if len(y_true) == 0:
        raise EvaluationError(EvaluationError.empty)

    classes = tuple(classes)
    unknown = sorted(set(y_true) - set(classes))
    if unknown:
        raise EvaluationError(EvaluationError.unknown_labels.format(labels=unknown))

    labels = list(classes)
    y_true = list(y_true)
    y_pred = list(y_pred)

    confusion = confusion_matrix(y_true, y_pred, labels=labels)
    precision, recall, f1, support = precision_recall_fscore_support(
        y_true, y_pred, labels=labels, average=None, zero_division=0)
    weighted = precision_recall_fscore_support(
        y_true, y_pred, labels=labels, average='weighted', zero_division=0)[:3]

    return EvalReport(
        classes=classes,
        per_class={c: (float(p), float(r), float(f)) for c, p, r, f in
                   zip(classes, precision, recall, f1)},
        support={c: int(s) for c, s in zip(classes, support)},
        weighted=tuple(float(x) for x in weighted),
        confusion=confusion.astype(np.int64),
    )


def evaluate(model: LinearModel, test: Dataset) -> EvalReport:
    """Evaluate a model on a labeled test set

    Raises
    ------
    SpaceMismatch
        If the test set is from another space
    EvaluationError
        If the test set is empty or has labels the model does not know
    """

    model.check_space(test.space)
    if len(test) == 0:
        raise EvaluationError(EvaluationError.empty)

    return evaluate_labels(test.y, model.predict_matrix(test.X), model.classes)


def similarity_from_confusion(confusion: np.ndarray,
                              classes: Sequence[str] = None) -> dict[tuple, int]:
    """Symmetric confusion counts between every pair of classes

    Parameters
    ----------
    confusion : np.ndarray
        Square count matrix, rows are the truth
    classes : Sequence[str], optional
        Labels of the rows. Defaults to the row indices.

    Returns
    -------
    dict[tuple, int]
        ``(a, b)`` with ``a`` before ``b`` in class order, mapped to
        ``confusion[a][b] + confusion[b][a]``
    """

    confusion = np.asarray(confusion)
    if confusion.ndim != 2 or confusion.shape[0] != confusion.shape[1]:
        raise ValueError(f'Confusion matrix must be square, got shape {confusion.shape}')

    n = confusion.shape[0]
    classes = list(classes) if classes is not None else list(range(n))

    return {
        (classes[i], classes[j]): int(confusion[i, j] + confusion[j, i])
        for i in range(n) for j in range(i + 1, n)
    }


def similarity_table(similarity: Mapping[tuple, int]) -> pd.DataFrame:
    """Pairs ranked from most to least confused"""

    rows = [(a, b, count) for (a, b), count in similarity.items()]
    frame = pd.DataFrame(rows, columns=['variety_a', 'variety_b', 'confusions'])

    return frame.sort_values('confusions', ascending=False, kind='stable').reset_index(drop=True)
