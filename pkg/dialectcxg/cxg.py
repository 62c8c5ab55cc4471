"""
Construction grammars: parsing grammar files, annotating words, and counting
construction matches over annotated token streams
"""

# Core imports
from __future__ import annotations
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

# Internal imports
from . import io
from .errors import DuplicateConstruction, EmptyRegion, GrammarParseError

# External imports
import numpy as np
import pandas as pd

UNK = 'UNK'
SLOT_SEPARATOR = ' -- '

# Separators need whitespace on both sides; "well--known" is a single form
_SLOT_SPLIT = re.compile(r'(?:^|\s+)--(?:\s+|$)')


@dataclass(frozen=True)
class AnnotatedToken:
    """A word with its syntactic tag and optional semantic class"""

    form: str
    syn: str
    sem: Optional[str] = None

    def __post_init__(self):

        if not self.form or not self.syn:
            raise ValueError('AnnotatedToken needs a non-empty form and syn tag')


class SlotKind(str, Enum):

    LEX = 'LEX'
    SYN = 'SYN'
    SEM = 'SEM'
    SYNSEM = 'SYNSEM'


@dataclass(frozen=True)
class SlotConstraint:
    """One slot of a construction.

    LEX slots hold a case-folded word form, SYN slots a syntactic tag, SEM
    slots a semantic class and SYNSEM slots both a tag and a class. Exactly
    the fields of the slot's kind are set.
    """

    kind: SlotKind
    lex: Optional[str] = None
    syn: Optional[str] = None
    sem: Optional[str] = None

    def __post_init__(self):

        object.__setattr__(self, 'kind', SlotKind(self.kind))
        if self.lex is not None:
            object.__setattr__(self, 'lex', self.lex.casefold())

        required = {
            SlotKind.LEX: ('lex',),
            SlotKind.SYN: ('syn',),
            SlotKind.SEM: ('sem',),
            SlotKind.SYNSEM: ('syn', 'sem'),
        }[self.kind]
        for field in ('lex', 'syn', 'sem'):
            value = getattr(self, field)
            if (field in required) != (value is not None and value != ''):
                raise ValueError(f'{self.kind.value} slot has invalid "{field}" value {value!r}')

    @classmethod
    def parse(cls, text: str) -> SlotConstraint:
        """Parse ``LEX:<form>``, ``SYN:<tag>``, ``SEM:<class>`` or
        ``SYNSEM:<tag>:<class>``

        Raises
        ------
        GrammarParseError
            If the slot is malformed
        """

        kind, sep, value = text.strip().partition(':')
        if not sep or not value:
            raise GrammarParseError(GrammarParseError.malformed_slot.format(slot=text))

        try:
            kind = SlotKind(kind)
        except ValueError:
            raise GrammarParseError(GrammarParseError.unknown_kind.format(kind=kind))

        try:
            if kind is SlotKind.LEX:
                return cls(kind, lex=value)
            if kind is SlotKind.SYN:
                return cls(kind, syn=value)
            if kind is SlotKind.SEM:
                return cls(kind, sem=value)
            syn, sep, sem = value.partition(':')
            if not sep:
                raise ValueError('SYNSEM needs <tag>:<class>')
            return cls(kind, syn=syn, sem=sem)
        except ValueError:
            raise GrammarParseError(GrammarParseError.malformed_slot.format(slot=text))

    def __str__(self):

        if self.kind is SlotKind.LEX:
            return f'LEX:{self.lex}'
        if self.kind is SlotKind.SYN:
            return f'SYN:{self.syn}'
        if self.kind is SlotKind.SEM:
            return f'SEM:{self.sem}'
        return f'SYNSEM:{self.syn}:{self.sem}'

    def matches(self, token: AnnotatedToken) -> bool:

        return slot_matches(self, token)


def slot_matches(constraint: SlotConstraint, token: AnnotatedToken) -> bool:
    """Whether a token fills a slot

    Parameters
    ----------
    constraint : SlotConstraint
        The slot
    token : AnnotatedToken
        Candidate filler

    Returns
    -------
    bool
        LEX compares case-folded forms, SYN compares tags, SEM compares classes
        (a token without a class never matches), SYNSEM compares both
    """

    kind = constraint.kind
    if kind is SlotKind.LEX:
        return token.form.casefold() == constraint.lex
    if kind is SlotKind.SYN:
        return token.syn == constraint.syn
    if kind is SlotKind.SEM:
        return token.sem is not None and token.sem == constraint.sem

    return token.sem is not None and token.syn == constraint.syn and token.sem == constraint.sem


@lru_cache(maxsize=1 << 16)
def token_keys(token: AnnotatedToken) -> tuple[SlotConstraint, ...]:
    """Every slot constraint the token satisfies (at most four)"""

    keys = [
        SlotConstraint(SlotKind.LEX, lex=token.form),
        SlotConstraint(SlotKind.SYN, syn=token.syn),
    ]
    if token.sem is not None:
        keys.append(SlotConstraint(SlotKind.SEM, sem=token.sem))
        keys.append(SlotConstraint(SlotKind.SYNSEM, syn=token.syn, sem=token.sem))

    return tuple(keys)


@dataclass(frozen=True)
class Construction:
    """An ordered sequence of slot constraints"""

    id: int
    slots: tuple[SlotConstraint, ...]

    def __post_init__(self):

        if not self.slots:
            raise GrammarParseError(GrammarParseError.empty_construction)

    def __len__(self):

        return len(self.slots)

    def __str__(self):

        return SLOT_SEPARATOR.join(str(slot) for slot in self.slots)


class Grammar:
    """An ordered, duplicate-free inventory of constructions.

    Grammars are immutable once built and can be shared across threads and
    processes. The prefix trie used by ``count_matches`` is built on first use.

    Parameters
    ----------
    name : str
        Grammar label, e.g. "CxG-2"
    constructions : Sequence[Construction]
        Constructions with ids 0..n-1 in order
    """

    def __init__(self, name: str, constructions: Sequence[Construction] = ()):

        self.name = name
        self.constructions = tuple(constructions)

        for i, construction in enumerate(self.constructions):
            if construction.id != i:
                raise ValueError(f'Construction ids must be contiguous from 0, '
                                 f'found {construction.id} at position {i}')

        seen = {}
        for construction in self.constructions:
            if construction.slots in seen:
                raise DuplicateConstruction(DuplicateConstruction.repeated.format(
                    construction=construction, first=seen[construction.slots]))
            seen[construction.slots] = construction.id

        self._trie = None

    @classmethod
    def from_slots(cls, name: str, slot_lists: Iterable[Sequence[SlotConstraint]]) -> Grammar:
        """Build a grammar from bare slot sequences, numbering them in order"""

        return cls(name, [Construction(i, tuple(slots)) for i, slots in enumerate(slot_lists)])

    @classmethod
    def from_file(cls, path: io.PathLike, name: str = None) -> Grammar:
        """Read a grammar file; the name defaults to the file stem"""

        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()

        return parse_grammar(text, name or Path(path).stem)

    def to_text(self) -> str:

        return ''.join(f'{construction}\n' for construction in self.constructions)

    def to_file(self, path: io.PathLike) -> None:

        io.write_lines((str(c) for c in self.constructions), path)

    def __len__(self):

        return len(self.constructions)

    def __iter__(self):

        return iter(self.constructions)

    def __getitem__(self, index):

        return self.constructions[index]

    def __eq__(self, other):

        return isinstance(other, Grammar) and self.name == other.name and \
            self.constructions == other.constructions

    def __getstate__(self):

        # The trie is rebuilt lazily rather than pickled
        state = self.__dict__.copy()
        state['_trie'] = None
        return state

    @property
    def trie(self) -> _TrieNode:

        if self._trie is None:
            self._trie = _build_trie(self.constructions)
        return self._trie


def parse_grammar(text: str, name: str = 'grammar') -> Grammar:
    """Parse a grammar file.

    One construction per line, slots separated by ``" -- "``; ``#`` starts a
    comment and blank lines are ignored.

    Parameters
    ----------
    text : str
        File contents
    name : str, optional
        Grammar name. Defaults to "grammar".

    Returns
    -------
    Grammar
        Constructions in file order

    Raises
    ------
    GrammarParseError
        With the line number of a malformed slot
    DuplicateConstruction
        With the line number of a repeated construction

    Examples
    --------
    >>> g = parse_grammar('SYN:NOUN -- SYNSEM:VERB:transfer -- SYNSEM:NOUN:animate -- SYN:NOUN')
    >>> len(g[0])
    4
    """

    constructions = []
    first_line = {}

    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue

        slots = []
        for part in _SLOT_SPLIT.split(line):
            try:
                slots.append(SlotConstraint.parse(part))
            except GrammarParseError as e:
                raise GrammarParseError(str(e), line=line_no) from None
        slots = tuple(slots)

        if slots in first_line:
            raise DuplicateConstruction(DuplicateConstruction.repeated.format(
                construction=SLOT_SEPARATOR.join(map(str, slots)),
                first=first_line[slots]), line=line_no)
        first_line[slots] = line_no

        constructions.append(Construction(len(constructions), slots))

    return Grammar(name, constructions)


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------

class _TrieNode:
    """Prefix tree over slot constraints; constructions sharing a prefix share
    the work of matching it"""

    __slots__ = ('children', 'ends')

    def __init__(self):

        self.children: dict[SlotConstraint, _TrieNode] = {}
        self.ends: list[int] = []


def _build_trie(constructions: Sequence[Construction]) -> _TrieNode:

    root = _TrieNode()
    for construction in constructions:
        node = root
        for slot in construction.slots:
            node = node.children.setdefault(slot, _TrieNode())
        node.ends.append(construction.id)

    return root


def count_matches(grammar: Grammar, tokens: Sequence[AnnotatedToken]) -> np.ndarray:
    """Construction frequencies in a token sequence

    Entry ``c`` is the number of start positions at which every slot of
    construction ``c`` matches the following tokens contiguously. Overlapping
    and nested matches are all counted.

    Parameters
    ----------
    grammar : Grammar
        Constructions to count
    tokens : Sequence[AnnotatedToken]
        Annotated text

    Returns
    -------
    np.ndarray
        int64 counts of length ``len(grammar)``
    """

    counts = np.zeros(len(grammar), dtype=np.int64)
    if not len(grammar) or not tokens:
        return counts

    root = grammar.trie
    keys = [token_keys(token) for token in tokens]
    n = len(tokens)
    hits = []

    for start in range(n):
        frontier = [root]
        offset = start
        while frontier and offset < n:
            step = []
            for node in frontier:
                children = node.children
                for key in keys[offset]:
                    child = children.get(key)
                    if child is not None:
                        if child.ends:
                            hits.extend(child.ends)
                        if child.children:
                            step.append(child)
            frontier = step
            offset += 1

    if hits:
        counts += np.bincount(hits, minlength=len(grammar))

    return counts


def count_matches_naive(grammar: Grammar, tokens: Sequence[AnnotatedToken]) -> np.ndarray:
    """Position-by-position reference scan with the same contract as
    ``count_matches``"""

    counts = np.zeros(len(grammar), dtype=np.int64)
    for construction in grammar:
        width = len(construction.slots)
        for start in range(len(tokens) - width + 1):
            if all(slot_matches(slot, tokens[start + k])
                   for k, slot in enumerate(construction.slots)):
                counts[construction.id] += 1

    return counts


# ---------------------------------------------------------------------------
# Annotation
# ---------------------------------------------------------------------------

Lexicon = Mapping[str, tuple[str, Optional[str]]]


def read_lexicon(path: io.PathLike) -> dict[str, tuple[str, Optional[str]]]:
    """Load a ``form<TAB>syn<TAB>sem`` lexicon (no header, "-" for no class)

    Forms are case-folded; on repeated forms the first entry wins.
    """

    frame = pd.read_csv(path, sep='\t', header=None, names=['form', 'syn', 'sem'],
                        dtype=str, keep_default_na=False, quoting=3, comment=None,
                        encoding='utf-8')

    lexicon = {}
    for form, syn, sem in frame.itertuples(index=False):
        if not form or form.startswith('#'):
            continue
        lexicon.setdefault(form.casefold(), (syn, None if sem in ('', '-') else sem))

    return lexicon


def write_lexicon(lexicon: Lexicon, path: io.PathLike) -> None:

    io.write_lines(
        (f'{form}\t{syn}\t{sem or "-"}' for form, (syn, sem) in sorted(lexicon.items())),
        path)


def annotate(words: Sequence[str], lexicon: Lexicon) -> list[AnnotatedToken]:
    """Tag words by case-folded lexicon lookup

    Parameters
    ----------
    words : Sequence[str]
        Word forms
    lexicon : Lexicon
        Case-folded form to (syn, sem)

    Returns
    -------
    list[AnnotatedToken]
        One token per word; unknown words get the ``UNK`` tag and no class
    """

    tokens = []
    for word in words:
        syn, sem = lexicon.get(word.casefold(), (UNK, None))
        tokens.append(AnnotatedToken(word, syn, sem))

    return tokens


def strip(tokens: Iterable[AnnotatedToken]) -> list[str]:
    """Word forms of annotated tokens"""

    return [token.form for token in tokens]


# ---------------------------------------------------------------------------
# Feature density
# ---------------------------------------------------------------------------

def relative_density(totals_by_region: Mapping[str, Sequence[float]]) -> dict[str, float]:
    """Percentage difference of each region's mean per-sample total from the
    unweighted mean of the region means

    Parameters
    ----------
    totals_by_region : Mapping[str, Sequence[float]]
        Per-sample construction totals for each region

    Returns
    -------
    dict[str, float]
        Region to relative density in percent

    Raises
    ------
    EmptyRegion
        If a region has no samples
    """

    means = {}
    for region, totals in totals_by_region.items():
        if len(totals) == 0:
            raise EmptyRegion(EmptyRegion.no_samples.format(region=region))
        means[region] = float(np.mean(totals))

    if not means:
        return {}

    grand_mean = float(np.mean(list(means.values())))
    if grand_mean == 0:
        return {region: 0.0 for region in means}

    return {region: (mean - grand_mean) / grand_mean * 100 for region, mean in means.items()}


def feature_density(grammar: Grammar,
                    samples: Mapping[str, Sequence[Sequence[AnnotatedToken]]]) -> dict[str, float]:
    """Relative average feature density per region

    Parameters
    ----------
    grammar : Grammar
        Grammar whose constructions are counted
    samples : Mapping[str, Sequence[Sequence[AnnotatedToken]]]
        Annotated fixed-length samples grouped by region

    Returns
    -------
    dict[str, float]
        Region to density relative to the cross-region mean, in percent
    """

    totals = {
        region: [int(count_matches(grammar, tokens).sum()) for tokens in region_samples]
        for region, region_samples in samples.items()
    }

    return relative_density(totals)
