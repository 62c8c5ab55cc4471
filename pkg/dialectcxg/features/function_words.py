"""
Function-word counts, the closed-class baseline
"""

# Core imports
from typing import Sequence

# Internal imports
from ._base import FeatureSpace, FeatureVector, SpaceKind, Vectorizer
from .. import io


def read_function_words(path: io.PathLike = None) -> list[str]:
    """Load a word list (one per line), case-folded and deduplicated in order

    Parameters
    ----------
    path : PathLike, optional
        Word list. Defaults to the English list shipped with the package.
    """

    words = io.read_lines(path or io.data_path('function_words.txt'))

    return list(dict.fromkeys(w.casefold() for w in words))


def function_word_vector(words: Sequence[str], wordlist: Sequence[str]) -> FeatureVector:
    """Occurrences of each listed word

    Parameters
    ----------
    words : Sequence[str]
        The sample's words
    wordlist : Sequence[str]
        Deduplicated function words; index ``i`` counts ``wordlist[i]``

    Returns
    -------
    FeatureVector
        Counts with dimension ``len(wordlist)``
    """

    return FunctionWordVectorizer(wordlist).transform(words)


class FunctionWordVectorizer(Vectorizer):

    def __init__(self, wordlist: Sequence[str]):

        self.wordlist = [w.casefold() for w in wordlist]
        if len(set(self.wordlist)) != len(self.wordlist):
            raise ValueError('Function-word list contains duplicates')

        self._index = {w: i for i, w in enumerate(self.wordlist)}
        self.space = FeatureSpace(SpaceKind.FUNCTION_WORDS, len(self.wordlist))

    def _counts(self, words):

        counts = {}
        for word in words:
            i = self._index.get(word.casefold())
            if i is not None:
                counts[i] = counts.get(i, 0) + 1

        return counts
