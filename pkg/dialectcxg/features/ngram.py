"""
Hashed word n-grams: a featurizer that needs no fitting, so no variety can
bias which n-grams get a dimension
"""

# Core imports
from collections import Counter
from functools import lru_cache
from typing import Mapping, Sequence

# Internal imports
from ._base import FeatureSpace, FeatureVector, SpaceKind, Vectorizer

DEFAULT_DIM = 30000

_FNV_OFFSET = 0xcbf29ce484222325
_FNV_PRIME = 0x100000001b3
_MASK_64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a hash"""

    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK_64

    return h


@lru_cache(maxsize=1 << 18)
def _gram_hash(gram: str) -> int:

    return fnv1a_64(gram.encode('utf-8'))


def _ngram_counts(words: Sequence[str], n: int, dim: int) -> Mapping[int, int]:

    folded = [w.casefold() for w in words]
    counts = Counter()
    for i in range(len(folded) - n + 1):
        gram = ' '.join(folded[i:i + n])
        counts[_gram_hash(gram) % dim] += 1

    return counts


def hash_ngram_vector(words: Sequence[str], n: int, dim: int = DEFAULT_DIM) -> FeatureVector:
    """Counts of case-folded word n-grams hashed into ``dim`` buckets

    Parameters
    ----------
    words : Sequence[str]
        The sample's words
    n : int
        N-gram order, 1 to 3
    dim : int, optional
        Number of buckets. Defaults to 30,000.

    Returns
    -------
    FeatureVector
        Bucket counts summing to ``max(0, len(words) - n + 1)``
    """

    if n not in (1, 2, 3):
        raise ValueError(f'n must be 1, 2 or 3, got {n}')

    space = FeatureSpace(SpaceKind.HASH_NGRAM, dim, n=n)

    return FeatureVector(space, _ngram_counts(words, n, dim))


class HashingVectorizer(Vectorizer):
    """Stateless n-gram featurizer (FNV-1a modulo ``dim``, unsigned counts)

    Parameters
    ----------
    n : int
        N-gram order, 1 to 3
    dim : int, optional
        Number of buckets. Defaults to 30,000.
    """

    def __init__(self, n: int, dim: int = DEFAULT_DIM):

        if n not in (1, 2, 3):
            raise ValueError(f'n must be 1, 2 or 3, got {n}')

        self.n = n
        self.dim = dim
        self.space = FeatureSpace(SpaceKind.HASH_NGRAM, dim, n=n)

    def _counts(self, words):

        return _ngram_counts(words, self.n, self.dim)
