"""
Within-domain, cross-domain and merged-domain classification experiments and
the report tables built from them
"""

# Core imports
from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, MutableMapping, Optional, Sequence

# Internal imports
from .classify import DEFAULT_C_GRID, Dataset, EvalReport, LinearModel, evaluate, train
from .errors import DegenerateData
from .features import FeatureSpace
from .ingest import Register
from .sampling import Split

# External imports
import pandas as pd

# Prepared data for one feature space, keyed by (register, split)
ExperimentData = Mapping[tuple[Register, Split], Dataset]


class Mode(str, Enum):

    WITHIN = 'within'
    CROSS = 'cross'
    MERGED = 'merged'


@dataclass(frozen=True)
class ExperimentConfig:
    """One classification experiment.

    Parameters
    ----------
    space : FeatureSpace
        Feature space of the data
    train_register : Register, optional
        Register to train on; None trains on both (merged mode)
    test_register : Register, optional
        Register to test on; None tests on both (merged mode)
    """

    space: FeatureSpace
    train_register: Optional[Register] = None
    test_register: Optional[Register] = None

    def __post_init__(self):

        if (self.train_register is None) != (self.test_register is None):
            raise ValueError('Merged experiments leave both registers unset')
        for name in ('train_register', 'test_register'):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, Register(value))

    @property
    def mode(self) -> Mode:

        if self.train_register is None:
            return Mode.MERGED
        if self.train_register is self.test_register:
            return Mode.WITHIN
        return Mode.CROSS


def _split(data: ExperimentData, registers: Sequence[Register], split: Split) -> Dataset:

    parts = []
    for register in registers:
        if (register, split) not in data:
            raise DegenerateData(DegenerateData.missing_split.format(
                split=split.value, register=register.value))
        parts.append(data[(register, split)])

    return parts[0] if len(parts) == 1 else Dataset.concat(parts)


def fit_model(data: ExperimentData, registers: Sequence[Register],
              c_grid: Sequence[float] = DEFAULT_C_GRID, seed: int = 0,
              jobs: int = 1) -> LinearModel:
    """Train on the TRAIN split of the given registers, tuning C on their DEV split"""

    return train(_split(data, registers, Split.TRAIN), _split(data, registers, Split.DEV),
                 c_grid, seed=seed, jobs=jobs)


def run_experiment(config: ExperimentConfig, data: ExperimentData,
                   c_grid: Sequence[float] = DEFAULT_C_GRID, seed: int = 0, jobs: int = 1,
                   models: MutableMapping = None) -> EvalReport:
    """Train and evaluate one experiment

    Within-domain runs train and test on one register. Cross-domain runs
    evaluate a model trained on one register against the other register's
    TEST split. Merged runs train on the union of both registers' TRAIN
    splits, tune on the union of their DEV splits and test on the union of
    their TEST splits, keeping every per-register division unchanged.

    Parameters
    ----------
    config : ExperimentConfig
        What to run
    data : ExperimentData
        Prepared datasets of ``config.space``
    c_grid : Sequence[float], optional
        Candidate C values. Defaults to (0.01, 0.1, 1, 10).
    seed : int, optional
        Solver seed. Defaults to 0.
    jobs : int, optional
        Parallel per-class fits. Defaults to 1.
    models : MutableMapping, optional
        Cache of trained models keyed by (space, registers); a within-domain
        model is reused by the cross-domain run from the same register

    Returns
    -------
    EvalReport
        Test-set report
    """

    if config.mode is Mode.MERGED:
        train_registers = test_registers = tuple(Register)
    else:
        train_registers = (config.train_register,)
        test_registers = (config.test_register,)

    key = (str(config.space), tuple(r.value for r in train_registers))
    if models is not None and key in models:
        model = models[key]
    else:
        model = fit_model(data, train_registers, c_grid, seed, jobs)
        if models is not None:
            models[key] = model

    return evaluate(model, _split(data, test_registers, Split.TEST))


def merged_breakdown(model: LinearModel, data: ExperimentData) -> dict[Register, EvalReport]:
    """Evaluate a merged-domain model on each register's TEST split separately"""

    return {register: evaluate(model, data[(register, Split.TEST)]) for register in Register}


def baseline_sweep(data_by_space: Mapping[FeatureSpace, ExperimentData],
                   c_grid: Sequence[float] = DEFAULT_C_GRID, seed: int = 0, jobs: int = 1,
                   models: MutableMapping = None) -> dict[tuple[FeatureSpace, Register], EvalReport]:
    """Within-domain experiments for every feature space and register"""

    return {
        (space, register): run_experiment(ExperimentConfig(space, register, register), data,
                                          c_grid, seed, jobs, models)
        for space, data in data_by_space.items()
        for register in Register
    }


def feature_set_table(reports: Mapping[tuple[FeatureSpace, Register], EvalReport]) -> pd.DataFrame:
    """Weighted F1 for each feature set (rows) and register (columns)"""

    spaces = list(dict.fromkeys(space for space, _ in reports))
    rows = [
        (space.label, *(reports[(space, r)].f1 if (space, r) in reports else float('nan')
                        for r in Register))
        for space in spaces
    ]

    return pd.DataFrame(rows, columns=['features', *(r.value for r in Register)])


def per_class_table(reports: Mapping[str, EvalReport]) -> pd.DataFrame:
    """Per-class precision, recall and F1 side by side for several reports

    Parameters
    ----------
    reports : Mapping[str, EvalReport]
        Column-group prefix to report, e.g. ``{'WEB': ..., 'SOCIAL': ...}``

    Returns
    -------
    pd.DataFrame
        One row per country plus ``w. avg``, columns ``<prefix>_precision``,
        ``<prefix>_recall`` and ``<prefix>_f1`` for each report
    """

    table = None
    for prefix, report in reports.items():
        frame = report.to_frame().drop(columns='support').set_index('country')
        frame.columns = [f'{prefix}_{c}' for c in frame.columns]
        table = frame if table is None else table.join(frame, how='outer', sort=False)

    # The weighted row stays last whatever the join order did
    order = [c for c in table.index if c != 'w. avg'] + ['w. avg']

    return table.loc[order].reset_index()


def cross_domain_table(reports: Mapping[tuple[Register, Register], EvalReport]) -> pd.DataFrame:
    """Per-class results of both cross-domain directions, keyed (train, test)"""

    return per_class_table({f'train_{a.value}': r for (a, b), r in reports.items() if a is not b})


def cross_domain_summary(reports: Mapping[tuple[FeatureSpace, Register, Register], EvalReport]) -> pd.DataFrame:
    """Weighted F1 of each feature set (rows) trained on one register and
    tested on the other (columns ``train_<register>``)"""

    spaces = list(dict.fromkeys(space for space, _, _ in reports))
    columns = {a: f'train_{a.value}' for a in Register}
    rows = []
    for space in spaces:
        scores = {a: float('nan') for a in Register}
        for (s, a, b), report in reports.items():
            if s == space and a is not b:
                scores[a] = report.f1
        rows.append((space.label, *(scores[a] for a in Register)))

    return pd.DataFrame(rows, columns=['features', *columns.values()])


def merged_table(report: EvalReport) -> pd.DataFrame:
    """Per-class results of the merged-domain experiment"""

    return report.to_frame()
