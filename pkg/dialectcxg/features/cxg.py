"""
Construction frequencies as features
"""

# Core imports
from typing import Sequence

# Internal imports
from ._base import FeatureSpace, FeatureVector, SpaceKind, Vectorizer
from ..cxg import AnnotatedToken, Grammar, Lexicon, annotate, count_matches


def cxg_vector(grammar: Grammar, tokens: Sequence[AnnotatedToken]) -> FeatureVector:
    """Construction counts of an annotated sample

    Parameters
    ----------
    grammar : Grammar
        Grammar defining the feature space
    tokens : Sequence[AnnotatedToken]
        Sample annotated with ``cxg.annotate``

    Returns
    -------
    FeatureVector
        Counts from ``count_matches`` with dimension ``len(grammar)``
    """

    space = FeatureSpace(SpaceKind.CXG, len(grammar), name=grammar.name)

    return FeatureVector.from_counts(space, count_matches(grammar, tokens))


class CxGVectorizer(Vectorizer):
    """Annotates raw words with a lexicon and counts constructions.

    Parameters
    ----------
    grammar : Grammar
        Grammar defining the feature space
    lexicon : Lexicon
        Case-folded form to (syn, sem)
    """

    def __init__(self, grammar: Grammar, lexicon: Lexicon):

        self.grammar = grammar
        self.lexicon = lexicon
        self.space = FeatureSpace(SpaceKind.CXG, len(grammar), name=grammar.name)

    def transform(self, words: Sequence[str]) -> FeatureVector:

        return cxg_vector(self.grammar, annotate(words, self.lexicon))
