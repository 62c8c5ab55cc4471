# External Imports
import numpy as np
import pytest

# Internal Imports
from dialectcxg.errors import DegenerateData
from dialectcxg.experiments import (ExperimentConfig, Mode, baseline_sweep, cross_domain_summary,
                                    cross_domain_table, feature_set_table, fit_model,
                                    merged_breakdown, merged_table, per_class_table,
                                    run_experiment)
from dialectcxg.features import CxGVectorizer
from dialectcxg.ingest import Register
from dialectcxg.sampling import Split
from dialectcxg.synth import DialectProfile, generate, synthetic_grammar
from resources.builders import disjoint_profiles, experiment_data, identical_profiles, split_samples

"""
Tests for experiments.py on synthetic dialects whose separability is known in
advance.

To run these tests, call "pytest -v" from the repository root.
"""

WEB, SOCIAL = Register.WEB, Register.SOCIAL
C_GRID = (0.1, 1.0)


def prepare(profiles, seed=0, n_train=150, n_dev=50, n_test=50):
    """Experiment data over both registers of a synthetic corpus"""

    grammar = synthetic_grammar(20)
    samples = []
    for register in Register:
        corpus = generate(profiles, n_train + n_dev + n_test, seed, register=register, grammar=grammar)
        samples += corpus.samples

    vectorizer = CxGVectorizer(grammar, corpus.lexicon)

    return vectorizer.space, experiment_data(split_samples(samples, n_train, n_dev, n_test), vectorizer)


def shifted_profiles(k=4, per_region=5, p=0.005):
    """In SOCIAL, region ``i`` uses the constructions region ``i + 1`` uses in WEB"""

    profiles = []
    for i in range(k):
        own = range(i * per_region, (i + 1) * per_region)
        nxt = range(((i + 1) % k) * per_region, ((i + 1) % k + 1) * per_region)
        shift = {**{c: -p for c in own}, **{c: p for c in nxt}}
        profiles.append(DialectProfile(f'R{i}', {c: p for c in own}, register_shift=shift))

    return profiles


@pytest.fixture(scope='module')
def disjoint():

    return prepare(disjoint_profiles(4))


def test_experiment_config_modes() -> None:

    space = CxGVectorizer(synthetic_grammar(3), {}).space
    assert ExperimentConfig(space, WEB, WEB).mode is Mode.WITHIN
    assert ExperimentConfig(space, 'WEB', 'SOCIAL').mode is Mode.CROSS
    assert ExperimentConfig(space).mode is Mode.MERGED

    with pytest.raises(ValueError):
        ExperimentConfig(space, WEB, None)


def test_disjoint_dialects_are_separable(disjoint) -> None:

    space, data = disjoint
    report = run_experiment(ExperimentConfig(space, WEB, WEB), data, C_GRID)

    assert report.f1 >= 0.95
    assert report.classes == ('R0', 'R1', 'R2', 'R3')
    assert sum(report.support.values()) == 200


def test_identical_dialects_are_at_chance() -> None:
    """With nothing to learn, predictions are independent of the true region
    and accuracy averages out at one in four"""

    reports = []
    for seed in (1, 2, 3):
        space, data = prepare(identical_profiles(4), seed=seed)
        reports.append(run_experiment(ExperimentConfig(space, WEB, WEB), data, C_GRID))

    assert abs(np.mean([r.accuracy for r in reports]) - 0.25) <= 0.06
    assert np.mean([r.f1 for r in reports]) <= 0.35


def test_shared_signal_transfers_across_registers(disjoint) -> None:

    space, data = disjoint
    models = {}
    within = run_experiment(ExperimentConfig(space, WEB, WEB), data, C_GRID, models=models)
    cross = run_experiment(ExperimentConfig(space, WEB, SOCIAL), data, C_GRID, models=models)

    # The cross-domain run reuses the WEB model
    assert len(models) == 1
    assert abs(cross.f1 - within.f1) <= 0.05


def test_register_shift_breaks_transfer() -> None:

    space, data = prepare(shifted_profiles(), seed=2)
    within = run_experiment(ExperimentConfig(space, WEB, WEB), data, C_GRID)
    cross = run_experiment(ExperimentConfig(space, WEB, SOCIAL), data, C_GRID)

    assert within.f1 >= 0.9
    assert within.f1 - cross.f1 >= 0.3


def test_merged_experiment(disjoint) -> None:

    space, data = disjoint
    report = run_experiment(ExperimentConfig(space), data, C_GRID)
    assert sum(report.support.values()) == 400
    assert report.f1 >= 0.95

    model = fit_model(data, tuple(Register), C_GRID)
    breakdown = merged_breakdown(model, data)
    assert set(breakdown) == {WEB, SOCIAL}
    assert all(sum(r.support.values()) == 200 for r in breakdown.values())

    table = merged_table(report)
    assert table['country'].tolist() == ['R0', 'R1', 'R2', 'R3', 'w. avg']


def test_missing_split_is_reported(disjoint) -> None:

    space, data = disjoint
    partial = {key: value for key, value in data.items() if key != (SOCIAL, Split.DEV)}

    with pytest.raises(DegenerateData):
        run_experiment(ExperimentConfig(space, SOCIAL, SOCIAL), partial, C_GRID)


def test_report_tables(disjoint) -> None:

    space, data = disjoint
    models = {}
    sweep = baseline_sweep({space: data}, C_GRID, models=models)

    features = feature_set_table(sweep)
    assert list(features.columns) == ['features', 'WEB', 'SOCIAL']
    assert features['features'].tolist() == ['synthetic']

    per_class = per_class_table({r.value: sweep[(space, r)] for r in Register})
    assert list(per_class.columns) == ['country', 'WEB_precision', 'WEB_recall', 'WEB_f1',
                                       'SOCIAL_precision', 'SOCIAL_recall', 'SOCIAL_f1']
    assert per_class['country'].tolist()[-1] == 'w. avg'

    cross = {(a, b): run_experiment(ExperimentConfig(space, a, b), data, C_GRID, models=models)
             for a in Register for b in Register}
    table = cross_domain_table(cross)
    assert list(table.columns)[1:4] == ['train_WEB_precision', 'train_WEB_recall', 'train_WEB_f1']
    assert len(table) == 5
    assert len(models) == 2

    summary = cross_domain_summary({(space, a, b): r for (a, b), r in cross.items()})
    assert list(summary.columns) == ['features', 'train_WEB', 'train_SOCIAL']
    assert summary.loc[0, 'train_WEB'] == cross[(WEB, SOCIAL)].f1
    assert summary.loc[0, 'train_SOCIAL'] == cross[(SOCIAL, WEB)].f1
