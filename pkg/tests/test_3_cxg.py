# External Imports
import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
import pickle
import pytest

# Internal Imports
from dialectcxg.cxg import (UNK, AnnotatedToken, Grammar, SlotConstraint, SlotKind, annotate,
                            count_matches, count_matches_naive, feature_density, parse_grammar,
                            read_lexicon, relative_density, slot_matches, strip, write_lexicon)
from dialectcxg.errors import DuplicateConstruction, EmptyRegion, GrammarParseError
from resources.builders import random_grammar, random_tokens

"""
Tests for cxg.py: grammar parsing, slot matching, construction counting and
feature density.

To run these tests, call "pytest -v" from the repository root.
"""

GRAMMAR = """\
# ditransitive
SYN:NOUN -- SYNSEM:VERB:transfer -- SYNSEM:NOUN:animate -- SYN:NOUN
LEX:the -- SYN:NOUN

SEM:animate   # any animate word
"""


def tok(form, syn, sem=None):

    return AnnotatedToken(form, syn, sem)


def test_parse_grammar() -> None:

    grammar = parse_grammar(GRAMMAR, 'g')

    assert grammar.name == 'g'
    assert len(grammar) == 3
    assert [c.id for c in grammar] == [0, 1, 2]
    assert grammar[0].slots[1] == SlotConstraint(SlotKind.SYNSEM, syn='VERB', sem='transfer')
    assert str(grammar[1]) == 'LEX:the -- SYN:NOUN'
    assert grammar[2].slots == (SlotConstraint(SlotKind.SEM, sem='animate'),)


def test_parse_grammar_errors_report_line() -> None:

    with pytest.raises(GrammarParseError, match='line 3'):
        parse_grammar('SYN:NOUN\n\nFOO:bar -- SYN:NOUN\n')
    with pytest.raises(GrammarParseError, match='line 1'):
        parse_grammar('SYNSEM:VERB -- SYN:NOUN')
    with pytest.raises(GrammarParseError) as info:
        parse_grammar('SYN:NOUN\nLEX: -- SYN:NOUN')
    assert info.value.line == 2
    with pytest.raises(GrammarParseError, match='line 1'):
        parse_grammar('SYN:NOUN --')

    with pytest.raises(DuplicateConstruction, match='line 1') as info:
        parse_grammar('SYN:NOUN -- LEX:of\n# again\nSYN:NOUN -- LEX:OF\n')
    assert info.value.line == 3


def test_separator_needs_surrounding_space() -> None:

    grammar = parse_grammar('LEX:well--known -- SYN:NOUN\nSYN:DET\t--  SYN:NOUN')

    assert grammar[0].slots == (SlotConstraint(SlotKind.LEX, lex='well--known'),
                                SlotConstraint(SlotKind.SYN, syn='NOUN'))
    assert len(grammar[1]) == 2
    assert_array_equal(count_matches(grammar, [tok('Well--known', 'ADJ'), tok('x', 'NOUN')]), [1, 0])


def test_lex_slots_are_casefolded() -> None:

    slot = SlotConstraint.parse('LEX:The')

    assert slot.lex == 'the'
    assert slot_matches(slot, tok('THE', 'DET'))
    assert not slot_matches(slot, tok('then', 'DET'))


def test_slot_kinds() -> None:

    animate_noun = tok('mary', 'PROPN', 'animate')
    plain = tok('book', 'NOUN')

    assert slot_matches(SlotConstraint(SlotKind.SYN, syn='PROPN'), animate_noun)
    assert slot_matches(SlotConstraint(SlotKind.SEM, sem='animate'), animate_noun)
    assert not slot_matches(SlotConstraint(SlotKind.SEM, sem='animate'), plain)
    assert slot_matches(SlotConstraint(SlotKind.SYNSEM, syn='PROPN', sem='animate'), animate_noun)
    assert not slot_matches(SlotConstraint(SlotKind.SYNSEM, syn='NOUN', sem='animate'), animate_noun)

    with pytest.raises(ValueError):
        SlotConstraint(SlotKind.SYN, syn='NOUN', sem='animate')
    with pytest.raises(ValueError):
        SlotConstraint(SlotKind.SYNSEM, syn='NOUN')


def test_count_matches_overlapping() -> None:

    grammar = parse_grammar('SYN:NOUN -- SYN:NOUN\nSYN:NOUN\nLEX:a -- SYN:NOUN -- SYN:NOUN -- SYN:NOUN')
    tokens = [tok('a', 'DET'), tok('x', 'NOUN'), tok('y', 'NOUN'), tok('z', 'NOUN')]

    assert_array_equal(count_matches(grammar, tokens), [2, 3, 1])
    assert_array_equal(count_matches(grammar, []), [0, 0, 0])
    assert_array_equal(count_matches(Grammar('empty'), tokens), [])


def test_count_matches_ditransitive() -> None:

    grammar = parse_grammar(GRAMMAR)
    tokens = [tok('john', 'NOUN'), tok('gave', 'VERB', 'transfer'), tok('mary', 'NOUN', 'animate'),
              tok('the', 'DET'), tok('book', 'NOUN')]

    # The four-slot pattern needs a NOUN directly after the recipient
    assert_array_equal(count_matches(grammar, tokens), [0, 1, 1])
    assert_array_equal(count_matches(grammar, tokens[:3] + tokens[4:]), [1, 0, 1])


def test_count_matches_agrees_with_naive_scan() -> None:
    """Trie matching and the position-by-position scan give equal counts"""

    rng = np.random.default_rng(2024)
    for _ in range(500):
        grammar = random_grammar(rng, int(rng.integers(1, 25)))
        tokens = random_tokens(rng, int(rng.integers(0, 80)))
        assert_array_equal(count_matches(grammar, tokens), count_matches_naive(grammar, tokens))


def test_counts_grow_with_appended_tokens() -> None:
    """Appending never lowers a count, and joining two streams keeps at least
    the matches of each, plus any spanning the seam"""

    rng = np.random.default_rng(99)
    for _ in range(200):
        grammar = random_grammar(rng, int(rng.integers(1, 15)))
        first = random_tokens(rng, int(rng.integers(0, 40)))
        second = random_tokens(rng, int(rng.integers(0, 40)))

        head, both = count_matches(grammar, first), count_matches(grammar, first + second)
        assert (both >= head).all()
        assert (both >= head + count_matches(grammar, second)).all()


def test_grammar_validation_and_pickle() -> None:

    slots = (SlotConstraint(SlotKind.SYN, syn='NOUN'),)
    with pytest.raises(DuplicateConstruction):
        Grammar.from_slots('g', [slots, slots])

    grammar = parse_grammar(GRAMMAR, 'g')
    count_matches(grammar, [tok('a', 'NOUN')])
    copy = pickle.loads(pickle.dumps(grammar))

    assert copy == grammar
    assert copy._trie is None


def test_grammar_file_roundtrip(tmp_path) -> None:

    grammar = parse_grammar(GRAMMAR, 'CxG-1')
    path = tmp_path / 'CxG-1.txt'
    grammar.to_file(path)

    assert Grammar.from_file(path) == grammar
    assert path.read_text(encoding='utf-8') == grammar.to_text()


def test_lexicon_and_annotate(tmp_path) -> None:

    path = tmp_path / 'lexicon.tsv'
    path.write_text('Gave\tVERB\ttransfer\nmary\tPROPN\tanimate\nthe\tDET\t-\nthe\tNOUN\t-\n',
                    encoding='utf-8')
    lexicon = read_lexicon(path)

    assert lexicon == {'gave': ('VERB', 'transfer'), 'mary': ('PROPN', 'animate'),
                       'the': ('DET', None)}

    tokens = annotate(['The', 'dog', 'GAVE'], lexicon)
    assert tokens == [tok('The', 'DET'), tok('dog', UNK), tok('GAVE', 'VERB', 'transfer')]
    assert strip(tokens) == ['The', 'dog', 'GAVE']

    write_lexicon(lexicon, tmp_path / 'copy.tsv')
    assert read_lexicon(tmp_path / 'copy.tsv') == lexicon


def test_relative_density() -> None:

    symmetric = relative_density({'A': [10, 12, 14], 'B': [12, 12, 12], 'C': [11, 13]})
    assert_allclose(list(symmetric.values()), [0, 0, 0], atol=1e-9)

    skewed = relative_density({'A': [20, 20], 'B': [10]})
    assert_allclose(skewed['A'], 100 / 3, rtol=1e-9)
    assert_allclose(skewed['B'], -100 / 3, rtol=1e-9)

    assert relative_density({'A': [0], 'B': [0]}) == {'A': 0.0, 'B': 0.0}
    assert relative_density({}) == {}
    with pytest.raises(EmptyRegion):
        relative_density({'A': [1], 'B': []})


def test_feature_density() -> None:

    grammar = parse_grammar('SYN:NOUN')
    noun, det = tok('x', 'NOUN'), tok('the', 'DET')
    density = feature_density(grammar, {
        'A': [[noun, noun, det], [noun, noun, noun, noun]],
        'B': [[noun, det, det], [det, noun, det, det]],
    })

    # Means of 3 and 1 around a grand mean of 2
    assert_allclose(density['A'], 50.0)
    assert_allclose(density['B'], -50.0)


def test_feature_density_balances_unequal_regions() -> None:
    """Region means are weighted equally, so deviations cancel however many
    samples each region has"""

    rng = np.random.default_rng(5)
    grammar = random_grammar(rng, 8)
    samples = {
        region: [random_tokens(rng, int(rng.integers(20, 60))) for _ in range(n)]
        for region, n in (('A', 3), ('B', 11), ('C', 6), ('D', 1))
    }
    density = feature_density(grammar, samples)

    assert set(density) == {'A', 'B', 'C', 'D'}
    assert abs(sum(density.values())) <= 1e-9
