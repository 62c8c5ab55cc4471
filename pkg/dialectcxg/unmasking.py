"""
Unmasking: retrain while removing the most predictive features of every
class each round, tracking how quickly performance decays
"""

# Core imports
from __future__ import annotations
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

# Internal imports
from . import io
from .classify import Dataset, LinearModel, evaluate, fit, train
from .errors import FeatureSpaceExhausted
from .warnings import UnmaskingWarning

# External imports
import numpy as np
import pandas as pd
from tqdm.auto import tqdm

DEFAULT_ROUNDS = 100


@dataclass(frozen=True)
class UnmaskingRound:

    index: int
    f1: float
    removed: tuple[int, ...]


@dataclass
class UnmaskingCurve:
    """Weighted F1 after each round of feature removal.

    Attributes
    ----------
    rounds : list[UnmaskingRound]
        Round 0 uses the full space and removes nothing
    C : float
        Regularization used in every round
    error : FeatureSpaceExhausted, optional
        Set when the space ran out before the requested rounds
    """

    rounds: list = field(default_factory=list)
    C: float = 1.0
    error: Optional[FeatureSpaceExhausted] = None

    def __len__(self):

        return len(self.rounds)

    @property
    def exhausted(self) -> bool:

        return self.error is not None

    @property
    def f1(self) -> np.ndarray:

        return np.array([r.f1 for r in self.rounds])

    @property
    def removed_total(self) -> int:

        return sum(len(r.removed) for r in self.rounds)

    def to_frame(self) -> pd.DataFrame:
        """Columns ``round, f1, n_removed``; n_removed is cumulative"""

        n_removed = np.cumsum([len(r.removed) for r in self.rounds])

        return pd.DataFrame({'round': [r.index for r in self.rounds],
                             'f1': self.f1, 'n_removed': n_removed})

    def removed_frame(self) -> pd.DataFrame:
        """One row per removed feature: ``round, feature``"""

        rows = [(r.index, feature) for r in self.rounds for feature in r.removed]

        return pd.DataFrame(rows, columns=['round', 'feature'])

    def write(self, stem: io.PathLike) -> None:
        """Write ``<stem>.csv`` and ``<stem>_removed.csv``"""

        io.write_frame(self.to_frame(), f'{stem}.csv')
        io.write_frame(self.removed_frame(), f'{stem}_removed.csv')

    def dominates(self, other: UnmaskingCurve, tolerance: float = 0.02) -> bool:
        """True if this curve is at least ``other`` minus ``tolerance`` at every shared round"""

        n = min(len(self), len(other))

        return bool(np.all(self.f1[:n] >= other.f1[:n] - tolerance))


def most_predictive(model: LinearModel, mask: np.ndarray) -> tuple[int, ...]:
    """Per class, the unmasked feature with the largest and the one with the
    smallest weight; the union over classes, sorted

    Parameters
    ----------
    model : LinearModel
        Current model
    mask : np.ndarray
        Boolean, True for features still in play

    Returns
    -------
    tuple[int, ...]
        Feature indices to remove, empty when nothing is left
    """

    active = np.flatnonzero(mask)
    if active.size == 0:
        return ()

    weights = model.weights[:, active]
    chosen = set(active[np.argmax(weights, axis=1)]) | set(active[np.argmin(weights, axis=1)])

    return tuple(sorted(int(i) for i in chosen))


def unmask(data: Dataset, test: Dataset, rounds: int = DEFAULT_ROUNDS, C: float = None,
           dev: Dataset = None, c_grid: Sequence[float] = None, seed: int = 0,
           jobs: int = 1, progress: bool = False) -> UnmaskingCurve:
    """Iteratively remove the most predictive features and retrain

    Round 0 trains on the full space. Each later round removes, for every
    class, the remaining feature with the largest weight and the one with the
    smallest weight (a feature picked by several classes is removed once),
    zeroes those columns in every row and retrains from scratch with the C of
    round 0.

    Parameters
    ----------
    data : Dataset
        Training data
    test : Dataset
        Evaluation data
    rounds : int, optional
        Rounds after round 0. Defaults to 100.
    C : float, optional
        Fixed regularization. When None, C is tuned on ``dev`` over
        ``c_grid`` in round 0 and frozen.
    dev : Dataset, optional
        Development data for tuning
    c_grid : Sequence[float], optional
        Candidates for tuning
    seed : int, optional
        Solver seed. Defaults to 0.
    jobs : int, optional
        Parallel per-class fits. Defaults to 1.
    progress : bool, optional
        Show a progress bar. Defaults to False.

    Returns
    -------
    UnmaskingCurve
        ``rounds + 1`` points unless the space is exhausted first
    """

    if rounds < 0:
        raise ValueError(f'rounds must be non-negative, got {rounds}')

    if C is None:
        if dev is None or c_grid is None:
            raise ValueError('Either C or both dev and c_grid must be given')
        model = train(data, dev, c_grid, seed=seed, jobs=jobs)
    else:
        model = fit(data, C, seed=seed, jobs=jobs)

    classes = model.classes
    curve = UnmaskingCurve(C=model.C)
    curve.rounds.append(UnmaskingRound(0, evaluate(model, test).f1, ()))

    mask = np.ones(data.space.dim, dtype=bool)
    for index in tqdm(range(1, rounds + 1), desc='Unmasking', disable=not progress):
        removed = most_predictive(model, mask)
        if not removed:
            curve.error = FeatureSpaceExhausted(
                FeatureSpaceExhausted.exhausted.format(removed=curve.removed_total))
            warnings.warn(UnmaskingWarning(UnmaskingWarning.exhausted.format(round=index - 1)))
            break

        mask[list(removed)] = False
        model = fit(data.masked(mask), curve.C, classes=classes, seed=seed, jobs=jobs)
        f1 = evaluate(model, test.masked(mask)).f1
        curve.rounds.append(UnmaskingRound(index, f1, removed))

    return curve
