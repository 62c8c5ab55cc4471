
# Core imports
from __future__ import annotations
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, Optional, Sequence

# Internal imports
from .. import io
from ..errors import SpaceMismatch

# External imports
import numpy as np
from scipy import sparse


class SpaceKind(str, Enum):

    CXG = 'CXG'
    HASH_NGRAM = 'HASH_NGRAM'
    FUNCTION_WORDS = 'FUNCTION_WORDS'


@dataclass(frozen=True)
class FeatureSpace:
    """Identifies the generator of a vector so models never mix spaces.

    The string form is ``CXG:<grammar>:<dim>``, ``HASH_NGRAM:<n>:<dim>`` or
    ``FUNCTION_WORDS:<dim>``.
    """

    kind: SpaceKind
    dim: int
    n: Optional[int] = None
    name: Optional[str] = None

    def __post_init__(self):

        object.__setattr__(self, 'kind', SpaceKind(self.kind))

    def __str__(self):

        if self.kind is SpaceKind.CXG:
            return f'CXG:{self.name}:{self.dim}'
        if self.kind is SpaceKind.HASH_NGRAM:
            return f'HASH_NGRAM:{self.n}:{self.dim}'
        return f'FUNCTION_WORDS:{self.dim}'

    @classmethod
    def parse(cls, text: str) -> FeatureSpace:

        kind, _, rest = text.partition(':')
        kind = SpaceKind(kind)
        if kind is SpaceKind.CXG:
            name, _, dim = rest.rpartition(':')
            return cls(kind, int(dim), name=name)
        if kind is SpaceKind.HASH_NGRAM:
            n, _, dim = rest.partition(':')
            return cls(kind, int(dim), n=int(n))
        return cls(kind, int(rest))

    @property
    def label(self) -> str:
        """Short human-readable name used in report tables"""

        if self.kind is SpaceKind.CXG:
            return self.name
        if self.kind is SpaceKind.HASH_NGRAM:
            return {1: 'Unigrams', 2: 'Bigrams', 3: 'Trigrams'}.get(self.n, f'{self.n}-grams')
        return 'Function words'


class FeatureVector:
    """Sparse non-negative count vector.

    Parameters
    ----------
    space : FeatureSpace
        Generator of the vector
    values : Mapping[int, int]
        Index to count; zero entries are dropped
    """

    def __init__(self, space: FeatureSpace, values: Mapping[int, int]):

        self.space = space
        self.values = {int(i): int(v) for i, v in sorted(values.items()) if v}

        for i, v in self.values.items():
            if not 0 <= i < space.dim:
                raise IndexError(f'Index {i} outside dimension {space.dim}')
            if v < 0:
                raise ValueError(f'Negative count {v} at index {i}')

    @property
    def dim(self) -> int:

        return self.space.dim

    @classmethod
    def from_counts(cls, space: FeatureSpace, counts: np.ndarray) -> FeatureVector:

        nonzero = np.flatnonzero(counts)
        return cls(space, dict(zip(nonzero.tolist(), counts[nonzero].tolist())))

    def to_dense(self) -> np.ndarray:

        dense = np.zeros(self.dim, dtype=np.int64)
        for i, v in self.values.items():
            dense[i] = v
        return dense

    def total(self) -> int:

        return sum(self.values.values())

    def __eq__(self, other):

        return isinstance(other, FeatureVector) and self.space == other.space and \
            self.values == other.values

    def __repr__(self):

        return f'FeatureVector({self.space}, {self.values})'

    def to_record(self, sample_id: str) -> str:
        """``sample_id space dim idx:val idx:val ...``"""

        entries = ' '.join(f'{i}:{v}' for i, v in self.values.items())
        return f'{sample_id} {self.space} {self.dim} {entries}'.rstrip()

    @classmethod
    def from_record(cls, line: str) -> tuple[str, FeatureVector]:

        sample_id, space, dim, *entries = line.split()
        space = FeatureSpace.parse(space)
        if space.dim != int(dim):
            raise SpaceMismatch(SpaceMismatch.different.format(got=dim, expected=space))

        values = {}
        for entry in entries:
            i, _, v = entry.partition(':')
            values[int(i)] = int(v)

        return sample_id, cls(space, values)


def stack(vectors: Sequence[FeatureVector], space: FeatureSpace = None) -> sparse.csr_matrix:
    """Stack vectors of one space into a CSR matrix of shape (n, dim)

    Raises
    ------
    SpaceMismatch
        If the vectors come from different spaces
    """

    if space is None:
        if not vectors:
            raise ValueError('Cannot infer the space of an empty vector list')
        space = vectors[0].space

    indptr, indices, data = [0], [], []
    for vector in vectors:
        if vector.space != space:
            raise SpaceMismatch(SpaceMismatch.different.format(got=vector.space, expected=space))
        indices.extend(vector.values.keys())
        data.extend(vector.values.values())
        indptr.append(len(indices))

    return sparse.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64),
         np.asarray(indptr, dtype=np.int64)),
        shape=(len(vectors), space.dim))


def write_vectors(records: Iterable[tuple[str, FeatureVector]], path: io.PathLike) -> None:

    io.write_lines((vector.to_record(sample_id) for sample_id, vector in records), path)


def read_vectors(path: io.PathLike) -> Iterator[tuple[str, FeatureVector]]:

    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            if line.strip():
                yield FeatureVector.from_record(line)


def _transform_chunk(args):

    vectorizer, chunk = args
    return [vectorizer.transform(words) for words in chunk]


class Vectorizer:
    """Base class for stateless featurizers.

    Subclasses set ``self.space`` and override ``_counts``; ``transform`` and
    ``transform_many`` are shared.
    """

    space: FeatureSpace

    def _counts(self, words: Sequence[str]) -> Mapping[int, int]:
        """Template method returning index counts for one sample"""

        raise NotImplementedError

    def transform(self, words: Sequence[str]) -> FeatureVector:
        """Feature vector of one sample's words"""

        return FeatureVector(self.space, self._counts(words))

    def transform_many(self, samples: Sequence[Sequence[str]], jobs: int = 1,
                       chunk_size: int = 256) -> list[FeatureVector]:
        """Vectorize many samples, optionally across worker processes

        Results are returned in input order regardless of ``jobs``.
        """

        if jobs <= 1 or len(samples) <= chunk_size:
            return [self.transform(words) for words in samples]

        chunks = [samples[i:i + chunk_size] for i in range(0, len(samples), chunk_size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_transform_chunk, [(self, chunk) for chunk in chunks])
            return [vector for chunk in results for vector in chunk]
