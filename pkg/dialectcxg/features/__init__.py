
from ._base import FeatureSpace, FeatureVector, Vectorizer, stack, read_vectors, write_vectors
from .cxg import CxGVectorizer, cxg_vector
from .ngram import HashingVectorizer, hash_ngram_vector, fnv1a_64
from .function_words import FunctionWordVectorizer, function_word_vector, read_function_words

__all__ = [
    "FeatureSpace",
    "FeatureVector",
    "Vectorizer",
    "stack",
    "read_vectors",
    "write_vectors",
    "CxGVectorizer",
    "cxg_vector",
    "HashingVectorizer",
    "hash_ngram_vector",
    "fnv1a_64",
    "FunctionWordVectorizer",
    "function_word_vector",
    "read_function_words",
]
