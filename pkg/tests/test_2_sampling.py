# External Imports
from collections import Counter
import numpy as np
import pytest

# Internal Imports
from dialectcxg.errors import InsufficientData, SamplingError
from dialectcxg.ingest import Register
from dialectcxg.sampling import (RegionSample, Split, SplitPlan, aggregate, assign_splits,
                                 derive_seed, read_samples, write_samples)
from resources.builders import make_doc

"""
Tests for sampling.py: fixed-size aggregation and capped split division.

To run these tests, call "pytest -v" from the repository root.
"""


def _docs(rng, n, country='CA', register=Register.WEB):

    lengths = rng.integers(1, 400, size=n)
    return [make_doc(' '.join(f'd{i}t{j}' for j in range(k)), country, register)
            for i, k in enumerate(lengths)]


def _samples(n, region='CA', register=Register.WEB):

    return [RegionSample(f'{region}-{i}', region, register, ('w',) * 3) for i in range(n)]


def test_aggregate_fixed_size_partition() -> None:
    """Every sample holds exactly 1,000 words and no word is used twice"""

    rng = np.random.default_rng(11)
    docs = _docs(rng, 10_000)
    total = sum(d.word_count for d in docs)

    samples = aggregate(docs, seed=5)

    assert len(samples) == total // 1000
    assert all(len(s.tokens) == 1000 for s in samples)

    used = Counter(t for s in samples for t in s.tokens)
    assert max(used.values()) == 1
    assert sum(used.values()) == len(samples) * 1000
    assert len(set(s.sample_id for s in samples)) == len(samples)


def test_aggregate_keeps_document_order_within_samples() -> None:

    docs = [make_doc(' '.join(f'd{i}t{j}' for j in range(300))) for i in range(10)]
    samples = aggregate(docs, seed=0)

    # Words of a document stay contiguous and in order
    flat = [t for s in samples for t in s.tokens]
    for a, b in zip(flat, flat[1:]):
        da, ta = a[1:].split('t')
        db, tb = b[1:].split('t')
        if da == db:
            assert int(tb) == int(ta) + 1


def test_aggregate_is_deterministic() -> None:

    rng = np.random.default_rng(2)
    docs = _docs(rng, 500)

    assert aggregate(docs, seed=9) == aggregate(docs, seed=9)
    assert aggregate(docs, seed=9) != aggregate(docs, seed=10)


def test_aggregate_edge_cases() -> None:

    assert aggregate([], seed=0) == []
    assert aggregate([make_doc('a b c')], seed=0) == []
    assert len(aggregate([make_doc('a b c d')], seed=0, sample_size=2)) == 2

    with pytest.raises(SamplingError):
        aggregate([make_doc('a b', 'CA'), make_doc('c d', 'US')], seed=0)
    with pytest.raises(SamplingError):
        aggregate([make_doc('a b', 'CA'), make_doc('c d', 'CA', Register.SOCIAL)], seed=0)


def test_assign_splits_caps() -> None:

    assigned = assign_splits(_samples(2000 + 30000))
    counts = Counter(s.split for s in assigned)

    assert counts == {Split.DEV: 2000, Split.TRAIN: 25000, Split.TEST: 5000}
    assert len({s.sample_id for s in assigned}) == len(assigned)


def test_assign_splits_large_region_is_capped() -> None:

    assigned = assign_splits(_samples(2000 + 90000))
    counts = Counter(s.split for s in assigned)

    assert counts == {Split.DEV: 2000, Split.TRAIN: 25000, Split.TEST: 5000}


def test_assign_splits_twenty_thousand() -> None:

    counts = Counter(s.split for s in assign_splits(_samples(20000)))

    assert counts == {Split.DEV: 2000, Split.TRAIN: 15000, Split.TEST: 3000}


def test_assign_splits_minimums() -> None:

    # 2,000 dev plus 15,000 divided 5:1 gives 12,500 train and 2,500 test
    counts = Counter(s.split for s in assign_splits(_samples(17000)))
    assert counts == {Split.DEV: 2000, Split.TRAIN: 12500, Split.TEST: 2500}

    with pytest.raises(InsufficientData):
        assign_splits(_samples(16990))
    # 14,600 after DEV would cover both minimums, but a 5:1 split leaves
    # only 2,433 for TEST
    with pytest.raises(InsufficientData):
        assign_splits(_samples(16600))
    with pytest.raises(InsufficientData):
        assign_splits(_samples(1999))


def test_assign_splits_small_plan() -> None:

    plan = SplitPlan(dev_per_region=2, max_train=10, max_test=2, min_train=1, min_test=1, seed=3)
    samples = _samples(30)
    assigned = assign_splits(samples, plan)

    assert [s.split for s in assigned] == [Split.DEV] * 2 + [Split.TRAIN] * 10 + [Split.TEST] * 2
    assert assigned == assign_splits(samples, plan)
    assert assign_splits([], plan) == []

    with pytest.raises(SamplingError):
        assign_splits(_samples(20) + _samples(20, 'US'), plan)
    with pytest.raises(SamplingError):
        SplitPlan(max_train=10, min_train=20)


def test_derive_seed() -> None:

    assert derive_seed(1, 'CA', 'WEB') == derive_seed(1, 'CA', 'WEB')
    assert derive_seed(1, 'CA', 'WEB') != derive_seed(1, 'CA', 'SOCIAL')
    assert derive_seed(1, 'CA', 'WEB') != derive_seed(2, 'CA', 'WEB')
    assert 0 <= derive_seed(7) < 2 ** 64


def test_sample_io(tmp_path) -> None:

    samples = [RegionSample('CA-0', 'CA', Register.WEB, ('a', 'b'), Split.TEST),
               RegionSample('US-0', 'US', Register.SOCIAL, ('c',))]
    path = tmp_path / 'samples.jsonl'

    assert write_samples(samples, path) == 2
    assert list(read_samples(path)) == samples
