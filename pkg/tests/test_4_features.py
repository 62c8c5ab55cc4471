# External Imports
import numpy as np
from numpy.testing import assert_array_equal
import pytest

# Internal Imports
from dialectcxg.cxg import parse_grammar
from dialectcxg.errors import SpaceMismatch
from dialectcxg.features import (CxGVectorizer, FeatureSpace, FeatureVector, FunctionWordVectorizer,
                                 HashingVectorizer, fnv1a_64, function_word_vector, hash_ngram_vector,
                                 read_function_words, read_vectors, stack, write_vectors)
from dialectcxg.features._base import SpaceKind

"""
Tests for the features package: hashed n-grams, function words, construction
vectors and the shared vector plumbing.

To run these tests, call "pytest -v" from the repository root.
"""


def test_fnv1a_reference_values() -> None:

    assert fnv1a_64(b'') == 0xcbf29ce484222325
    assert fnv1a_64(b'a') == 0xaf63dc4c8601ec8c
    assert fnv1a_64(b'foobar') == 0x85944171f73967e8


def test_hash_ngram_vector() -> None:

    words = 'The cat saw the dog'.split()

    unigrams = hash_ngram_vector(words, 1, dim=1000)
    assert unigrams.total() == 5
    assert unigrams.values[fnv1a_64(b'the') % 1000] == 2
    assert str(unigrams.space) == 'HASH_NGRAM:1:1000'

    bigrams = hash_ngram_vector(words, 2, dim=1000)
    assert bigrams.total() == 4
    assert fnv1a_64(b'cat saw') % 1000 in bigrams.values

    assert hash_ngram_vector(words[:2], 3, dim=1000).total() == 0
    assert hash_ngram_vector([], 1).dim == 30000

    with pytest.raises(ValueError):
        hash_ngram_vector(words, 4)
    with pytest.raises(ValueError):
        HashingVectorizer(0)


def test_hashing_is_unbiased_by_input() -> None:
    """The same words land in the same buckets whatever else the sample holds"""

    vectorizer = HashingVectorizer(1, dim=64)
    alone = vectorizer.transform(['river'])
    mixed = vectorizer.transform(['river', 'lake', 'sea'])

    (index,) = alone.values
    assert mixed.values[index] >= 1
    assert vectorizer.transform(['RIVER']) == alone


def test_function_words() -> None:

    wordlist = read_function_words()
    assert 'the' in wordlist
    assert len(wordlist) == len(set(wordlist))

    vector = function_word_vector(['The', 'cat', 'and', 'the', 'dog'], ['the', 'and', 'of'])
    assert_array_equal(vector.to_dense(), [2, 1, 0])
    assert str(vector.space) == 'FUNCTION_WORDS:3'

    with pytest.raises(ValueError):
        FunctionWordVectorizer(['the', 'The'])


def test_cxg_vectorizer() -> None:

    grammar = parse_grammar('SYN:DET -- SYN:NOUN\nLEX:gave\nSEM:animate', 'CxG-1')
    lexicon = {'the': ('DET', None), 'dog': ('NOUN', 'animate'), 'gave': ('VERB', 'transfer')}
    vector = CxGVectorizer(grammar, lexicon).transform('the dog gave the bone'.split())

    assert str(vector.space) == 'CXG:CxG-1:3'
    assert_array_equal(vector.to_dense(), [1, 1, 1])
    assert vector.space.label == 'CxG-1'


def test_feature_space_parse() -> None:

    for text in ('CXG:CxG-2:19000', 'HASH_NGRAM:3:30000', 'FUNCTION_WORDS:320'):
        assert str(FeatureSpace.parse(text)) == text

    assert FeatureSpace.parse('CXG:a:b:5').name == 'a:b'
    assert FeatureSpace(SpaceKind.HASH_NGRAM, 10, n=2).label == 'Bigrams'
    with pytest.raises(ValueError):
        FeatureSpace.parse('WORDS:10')


def test_feature_vector_validation() -> None:

    space = FeatureSpace(SpaceKind.FUNCTION_WORDS, 3)

    assert FeatureVector(space, {0: 0, 2: 4}).values == {2: 4}
    with pytest.raises(IndexError):
        FeatureVector(space, {3: 1})
    with pytest.raises(ValueError):
        FeatureVector(space, {1: -2})


def test_stack() -> None:

    space = FeatureSpace(SpaceKind.FUNCTION_WORDS, 4)
    vectors = [FeatureVector(space, {0: 1, 3: 2}), FeatureVector(space, {}),
               FeatureVector(space, {1: 5})]
    X = stack(vectors)

    assert X.shape == (3, 4)
    assert_array_equal(X.toarray(), [[1, 0, 0, 2], [0, 0, 0, 0], [0, 5, 0, 0]])
    assert stack([], space).shape == (0, 4)

    other = FeatureSpace(SpaceKind.FUNCTION_WORDS, 5)
    with pytest.raises(SpaceMismatch):
        stack(vectors + [FeatureVector(other, {4: 1})])
    with pytest.raises(ValueError):
        stack([])


def test_vector_records(tmp_path) -> None:

    space = FeatureSpace(SpaceKind.HASH_NGRAM, 100, n=2)
    records = [('s1', FeatureVector(space, {5: 2, 90: 1})), ('s2', FeatureVector(space, {}))]

    assert records[0][1].to_record('s1') == 's1 HASH_NGRAM:2:100 100 5:2 90:1'
    assert FeatureVector.from_record('s2 HASH_NGRAM:2:100 100') == records[1]

    path = tmp_path / 'vectors.txt'
    write_vectors(records, path)
    assert list(read_vectors(path)) == records

    with pytest.raises(SpaceMismatch):
        FeatureVector.from_record('s1 HASH_NGRAM:2:100 99 5:2')


def test_transform_many_preserves_order() -> None:

    rng = np.random.default_rng(4)
    samples = [[f'w{k}' for k in rng.integers(0, 50, size=20)] for _ in range(600)]
    vectorizer = HashingVectorizer(2, dim=500)

    serial = vectorizer.transform_many(samples)
    parallel = vectorizer.transform_many(samples, jobs=2, chunk_size=100)

    assert parallel == serial
    assert serial[17] == vectorizer.transform(samples[17])
