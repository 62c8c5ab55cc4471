"""
Synthetic multi-dialect corpora with controlled construction usage

Every synthetic construction begins with a marker word that occurs nowhere
else, so the number of matches in a sample equals the number of instances
injected into it.
"""

# Core imports
from __future__ import annotations
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

# Internal imports
from . import io
from .cxg import Grammar, SlotConstraint, SlotKind, write_lexicon
from .errors import InvalidProfile
from .ingest import Register
from .sampling import SAMPLE_SIZE, RegionSample, derive_seed, write_samples
from .warnings import ProfileWarning

# External imports
import numpy as np

BACKGROUND_SIZE = 200
_BACKGROUND_TAGS = ('DET', 'ADJ', 'NOUN', 'VERB', 'ADV')

# Slot patterns cycled over construction ids, with the words that fill them
_PATTERNS = (
    ((SlotConstraint(SlotKind.SYN, syn='NOUN'),), ('thing',)),
    ((SlotConstraint(SlotKind.SYNSEM, syn='VERB', sem='transfer'),
      SlotConstraint(SlotKind.SYN, syn='NOUN')), ('gave', 'thing')),
    ((SlotConstraint(SlotKind.SEM, sem='animate'),), ('friend',)),
)
_FILLER_LEXICON = {
    'thing': ('NOUN', 'artifact'),
    'gave': ('VERB', 'transfer'),
    'friend': ('NOUN', 'animate'),
}


def marker(construction: int) -> str:

    return f'mk{construction}'


def synthetic_grammar(n_constructions: int, name: str = 'synthetic') -> Grammar:
    """Grammar whose construction ``c`` is ``LEX:mk<c>`` followed by one of a
    few fixed slot patterns"""

    return Grammar.from_slots(name, (
        (SlotConstraint(SlotKind.LEX, lex=marker(c)), *_PATTERNS[c % len(_PATTERNS)][0])
        for c in range(n_constructions)
    ))


def instance(construction: int) -> tuple[str, ...]:
    """Words of one instance of a synthetic construction"""

    return (marker(construction), *_PATTERNS[construction % len(_PATTERNS)][1])


@dataclass
class DialectProfile:
    """Construction usage of one synthetic region.

    Parameters
    ----------
    region : str
        Region label
    construction_probs : Mapping[int, float]
        Construction id to per-token emission probability; unlisted
        constructions are never emitted
    lexicon_bias : Mapping[str, float], optional
        Extra sampling weight of filler words on top of the uniform background
    register_shift : Mapping[int, float], optional
        Added to ``construction_probs`` (then clipped to [0, 1]) for the
        SOCIAL register
    """

    region: str
    construction_probs: Mapping[int, float]
    lexicon_bias: Mapping[str, float] = field(default_factory=dict)
    register_shift: Optional[Mapping[int, float]] = None

    def __post_init__(self):

        for construction, p in self.construction_probs.items():
            if not 0 <= p <= 1 or math.isnan(p):
                raise InvalidProfile(InvalidProfile.probability.format(
                    region=self.region, value=p, construction=construction))
        for word, weight in self.lexicon_bias.items():
            if weight < 0 or math.isnan(weight):
                raise InvalidProfile(InvalidProfile.weight.format(
                    region=self.region, value=weight, word=word))

    @property
    def constructions(self) -> set[int]:

        return set(self.construction_probs) | set(self.register_shift or {})

    def probabilities(self, register: Register = Register.WEB) -> dict[int, float]:
        """Emission probabilities in a register"""

        probs = dict(self.construction_probs)
        if Register(register) is Register.SOCIAL and self.register_shift:
            for construction, delta in self.register_shift.items():
                probs[construction] = float(np.clip(probs.get(construction, 0.0) + delta, 0, 1))

        return probs


@dataclass
class SyntheticCorpus:

    samples: list
    lexicon: dict
    grammar: Grammar

    def write(self, directory: io.PathLike) -> dict[str, Path]:
        """Write ``samples.jsonl``, ``<grammar>.txt`` and ``lexicon.tsv``"""

        directory = Path(directory)
        paths = {
            'samples': directory / 'samples.jsonl',
            'grammar': directory / f'{self.grammar.name}.txt',
            'lexicon': directory / 'lexicon.tsv',
        }
        write_samples(self.samples, paths['samples'])
        self.grammar.to_file(paths['grammar'])
        write_lexicon(self.lexicon, paths['lexicon'])

        return paths


def synthetic_lexicon(grammar: Grammar, extra_words: Sequence[str] = ()) -> dict:
    """Annotations for markers, slot fillers, background and extra words"""

    lexicon = {background_word(i): (_BACKGROUND_TAGS[i % len(_BACKGROUND_TAGS)], None)
               for i in range(BACKGROUND_SIZE)}
    for word in extra_words:
        lexicon.setdefault(word.casefold(), ('NOUN', None))
    lexicon.update(_FILLER_LEXICON)
    for c in range(len(grammar)):
        lexicon[marker(c)] = ('PART', None)

    return lexicon


def background_word(i: int) -> str:

    return f'w{i:03d}'


def _region_samples(profile: DialectProfile, vocabulary: Sequence[str], register: Register,
                    count: int, sample_size: int, seed: int) -> list[RegionSample]:

    rng = np.random.default_rng(derive_seed(seed, profile.region, register.value))

    weights = np.array([
        (1.0 if i < BACKGROUND_SIZE else 0.0) + profile.lexicon_bias.get(word, 0.0)
        for i, word in enumerate(vocabulary)
    ])
    weights = weights / weights.sum()

    probs = sorted(profile.probabilities(register).items())
    ids = np.array([c for c, _ in probs], dtype=np.int64)
    p = np.array([p for _, p in probs])

    samples = []
    for i in range(count):
        counts = rng.binomial(sample_size, p) if len(p) else np.zeros(0, dtype=np.int64)
        instances = [instance(int(c)) for c, n in zip(ids, counts) for _ in range(n)]

        needed = sum(len(words) for words in instances)
        if needed > sample_size:
            warnings.warn(ProfileWarning(ProfileWarning.overflow.format(
                region=profile.region, needed=needed, size=sample_size)))
            kept, used = [], 0
            for j in rng.permutation(len(instances)):
                if used + len(instances[j]) <= sample_size:
                    kept.append(instances[j])
                    used += len(instances[j])
            instances, needed = kept, used

        fillers = rng.choice(len(vocabulary), size=sample_size - needed, p=weights)
        units = instances + [(vocabulary[j],) for j in fillers]

        tokens = tuple(word for j in rng.permutation(len(units)) for word in units[j])
        samples.append(RegionSample(f'{profile.region}-{register.value}-{i:06d}',
                                    profile.region, register, tokens))

    return samples


def generate(profiles: Sequence[DialectProfile], samples_per_region: int, seed: int,
             register: Register = Register.WEB, sample_size: int = SAMPLE_SIZE,
             grammar: Grammar = None) -> SyntheticCorpus:
    """Generate fixed-size samples for every profile

    Each sample draws, for every construction, a Binomial(sample_size, p)
    number of instances, fills the remaining positions with background
    words, and shuffles instances and fillers as units, so every sample has
    exactly ``sample_size`` words and construction ``c`` is expected
    ``p * sample_size`` times.

    Parameters
    ----------
    profiles : Sequence[DialectProfile]
        At least two regions
    samples_per_region : int
        Samples per region, at least 1
    seed : int
        Generation seed
    register : Register, optional
        SOCIAL applies each profile's ``register_shift``. Defaults to WEB.
    sample_size : int, optional
        Words per sample. Defaults to 1,000.
    grammar : Grammar, optional
        Synthetic grammar to use. Defaults to one just large enough for
        every construction the profiles mention.

    Returns
    -------
    SyntheticCorpus
        Samples ordered by profile, the annotation lexicon and the grammar

    Raises
    ------
    InvalidProfile
        If fewer than two profiles are given, the count is below 1, or a
        profile mentions a construction outside the grammar
    """

    if len(profiles) < 2:
        raise InvalidProfile(InvalidProfile.too_few.format(n=len(profiles)))
    if samples_per_region < 1:
        raise InvalidProfile(InvalidProfile.count.format(n=samples_per_region))

    register = Register(register)
    if grammar is None:
        n = max((max(p.constructions, default=-1) for p in profiles), default=-1) + 1
        grammar = synthetic_grammar(max(n, 1))

    for profile in profiles:
        for construction in profile.constructions:
            if not 0 <= construction < len(grammar):
                raise InvalidProfile(InvalidProfile.construction.format(
                    region=profile.region, construction=construction))

    extra = sorted({w for p in profiles for w in p.lexicon_bias} -
                   {background_word(i) for i in range(BACKGROUND_SIZE)})
    vocabulary = [background_word(i) for i in range(BACKGROUND_SIZE)] + extra

    samples = []
    for profile in profiles:
        samples.extend(_region_samples(profile, vocabulary, register, samples_per_region,
                                       sample_size, seed))

    return SyntheticCorpus(samples, synthetic_lexicon(grammar, extra), grammar)
