"""
Random aggregation of documents into fixed-size samples and capped
train/dev/test division
"""

# Core imports
from __future__ import annotations
import dataclasses
import zlib
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Optional, Sequence

# Internal imports
from . import io
from .errors import InsufficientData, SamplingError
from .ingest import GeoDocument, Register

# External imports
import awkward as ak
import numpy as np

SAMPLE_SIZE = 1000


class Split(str, Enum):

    TRAIN = 'TRAIN'
    DEV = 'DEV'
    TEST = 'TEST'


@dataclass(frozen=True)
class RegionSample:
    """A fixed-size block of words from one region and register.

    Parameters
    ----------
    sample_id : str
        Stable identifier
    region : str
        Country code
    register : Register
        WEB or SOCIAL
    tokens : tuple[str, ...]
        The words of the sample
    split : Split, optional
        Set by ``assign_splits``. Defaults to None.
    """

    sample_id: str
    region: str
    register: Register
    tokens: tuple[str, ...]
    split: Optional[Split] = None

    def __post_init__(self):

        object.__setattr__(self, 'register', Register(self.register))
        if self.split is not None:
            object.__setattr__(self, 'split', Split(self.split))

    @property
    def text(self) -> str:

        return ' '.join(self.tokens)

    def to_dict(self) -> dict:

        return {
            'sample_id': self.sample_id,
            'region': self.region,
            'register': self.register.value,
            'split': self.split.value if self.split else None,
            'text': self.text,
        }

    @classmethod
    def from_dict(cls, record: dict) -> RegionSample:

        return cls(record['sample_id'], record['region'], record['register'],
                   tuple(record['text'].split()), record.get('split'))


def read_samples(path: io.PathLike) -> Iterator[RegionSample]:

    for _, record in io.read_jsonl(path):
        yield RegionSample.from_dict(record)


def write_samples(samples: Iterable[RegionSample], path: io.PathLike) -> int:

    return io.write_jsonl((s.to_dict() for s in samples), path)


@dataclass(frozen=True)
class SplitPlan:
    """How many samples each (region, register) contributes to each split.

    Parameters
    ----------
    dev_per_region : int, optional
        Development samples, fixed regardless of region size. Defaults to 2,000.
    max_train, max_test : int, optional
        Caps. Default to 25,000 and 5,000.
    min_train, min_test : int, optional
        Minimums, below which a region is rejected. Default to 12,000 and 2,500.
    train_test_ratio : int, optional
        Training samples per testing sample before capping. Defaults to 5.
    seed : int, optional
        Seed for the shuffle that precedes division. Defaults to 0.
    """

    dev_per_region: int = 2000
    max_train: int = 25000
    max_test: int = 5000
    min_train: int = 12000
    min_test: int = 2500
    train_test_ratio: int = 5
    seed: int = 0

    def __post_init__(self):

        if self.max_train < self.min_train or self.max_test < self.min_test:
            raise SamplingError(SamplingError.bad_plan.format(
                max_train=self.max_train, min_train=self.min_train,
                max_test=self.max_test, min_test=self.min_test))


def derive_seed(seed: int, *keys: str) -> int:
    """Stable per-group seed so groups can be processed in any order

    Parameters
    ----------
    seed : int
        Run seed
    *keys : str
        Group identifiers, e.g. region and register

    Returns
    -------
    int
        64-bit seed
    """

    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + \
        [zlib.crc32(k.encode('utf-8')) for k in keys]

    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def aggregate(docs: Sequence[GeoDocument], seed: int,
              sample_size: int = SAMPLE_SIZE) -> list[RegionSample]:
    """Shuffle documents and cut their concatenated words into samples

    Documents that straddle a sample boundary are split at the boundary, and
    the trailing remainder shorter than ``sample_size`` is discarded.

    Parameters
    ----------
    docs : Sequence[GeoDocument]
        Documents from a single (region, register) pair
    seed : int
        Shuffle seed
    sample_size : int, optional
        Words per sample. Defaults to 1,000.

    Returns
    -------
    list[RegionSample]
        Samples, empty when there are fewer than ``sample_size`` words

    Raises
    ------
    SamplingError
        If the documents come from more than one (region, register) pair
    """

    if not docs:
        return []

    groups = {(doc.country, doc.register) for doc in docs}
    if len(groups) > 1:
        raise SamplingError(SamplingError.mixed_groups.format(groups=sorted(groups)))
    region, register = groups.pop()

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(docs))

    words = ak.Array([docs[i].text.split() for i in order])
    flat = ak.flatten(words, axis=1)

    n_samples = len(flat) // sample_size
    if n_samples == 0:
        return []

    chunks = ak.unflatten(flat[:n_samples * sample_size], sample_size)

    return [
        RegionSample(f'{region}-{register.value}-{i:06d}', region, register, tuple(tokens))
        for i, tokens in enumerate(ak.to_list(chunks))
    ]


def assign_splits(samples: Sequence[RegionSample], plan: SplitPlan = SplitPlan()) -> list[RegionSample]:
    """Divide one region's samples into development, training and testing sets

    After a seeded shuffle the first ``dev_per_region`` samples go to DEV. The
    rest are divided ``train_test_ratio``:1 between TRAIN and TEST and each
    part is truncated at its cap; samples beyond the caps are left out.

    Parameters
    ----------
    samples : Sequence[RegionSample]
        Samples of a single (region, register) pair
    plan : SplitPlan, optional
        Sizes and seed. Defaults to the full-scale plan.

    Returns
    -------
    list[RegionSample]
        Assigned samples, DEV first, then TRAIN, then TEST

    Raises
    ------
    InsufficientData
        If the region cannot fill DEV or falls below either minimum
    """

    if not samples:
        return []

    groups = {(s.region, s.register) for s in samples}
    if len(groups) > 1:
        raise SamplingError(SamplingError.mixed_samples)
    region, register = groups.pop()

    n = len(samples)
    if n < plan.dev_per_region:
        raise InsufficientData(InsufficientData.too_few_for_dev.format(
            region=region, register=register.value, n=n, dev=plan.dev_per_region))

    rng = np.random.default_rng(plan.seed)
    order = rng.permutation(n)

    rest = n - plan.dev_per_region
    n_test = rest // (plan.train_test_ratio + 1)
    n_train = rest - n_test

    if n_train < plan.min_train or n_test < plan.min_test:
        raise InsufficientData(InsufficientData.below_minimum.format(
            region=region, register=register.value, train=min(n_train, plan.max_train),
            test=min(n_test, plan.max_test), min_train=plan.min_train, min_test=plan.min_test))

    n_train = min(n_train, plan.max_train)
    n_test = min(n_test, plan.max_test)

    dev_end = plan.dev_per_region
    train_end = dev_end + n_train
    sizes = ((Split.DEV, 0, dev_end), (Split.TRAIN, dev_end, train_end),
             (Split.TEST, train_end, train_end + n_test))

    assigned = []
    for split, start, end in sizes:
        for i in order[start:end]:
            assigned.append(dataclasses.replace(samples[i], split=split))

    return assigned
