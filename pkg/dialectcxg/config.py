"""
Declarative run configuration read from YAML
"""

# Core imports
from __future__ import annotations
import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

# Internal imports
from .classify import DEFAULT_C_GRID
from .errors import ConfigError, InvalidProfile, SamplingError
from .features.ngram import DEFAULT_DIM
from .mapping import DEFAULT_THRESHOLD
from .sampling import SAMPLE_SIZE, SplitPlan
from .synth import DialectProfile
from .unmasking import DEFAULT_ROUNDS

# External imports
import yaml

# Stages in dependency order
STAGES = ('ingest', 'map', 'sample', 'synth', 'featurize', 'train', 'eval',
          'crossdomain', 'density', 'unmask', 'similarity')

CACHE_VARIABLE = 'DIALECTCXG_CACHE'

_NGRAM_SPACES = {'unigrams': 1, 'bigrams': 2, 'trigrams': 3}
_INPUT_KEYS = ('web_dump', 'social_dump', 'cities', 'tld_table', 'tld_exclusions',
               'boilerplate', 'lexicon', 'function_words', 'regions')

# Inputs each stage cannot run without
_REQUIRED_INPUTS = {
    'density': ('lexicon',),
}


@dataclass(frozen=True)
class SpaceName:
    """A configured feature space: ``cxg:<grammar>``, ``unigrams``,
    ``bigrams``, ``trigrams`` or ``function_words``"""

    key: str

    def __post_init__(self):

        if not (self.grammar or self.key in _NGRAM_SPACES or self.key == 'function_words'):
            raise ConfigError(ConfigError.unknown_space.format(space=self.key))

    def __str__(self):

        return self.key

    @property
    def grammar(self) -> Optional[str]:

        prefix, sep, name = self.key.partition(':')
        return name if sep and prefix == 'cxg' and name else None

    @property
    def n(self) -> Optional[int]:

        return _NGRAM_SPACES.get(self.key)

    @property
    def stem(self) -> str:
        """File-name-safe form"""

        return self.key.replace(':', '_')


@dataclass(frozen=True)
class SynthConfig:

    profiles: tuple
    samples_per_region: int = 300
    n_constructions: Optional[int] = None


@dataclass(kw_only=True)
class RunConfig:
    """Everything a pipeline run needs.

    Relative paths are resolved against the directory of the configuration
    file. Unset values fall back to the pipeline defaults.
    """

    seed: int
    stages: tuple = STAGES
    output_dir: Path = Path('output')
    jobs: int = 1
    inputs: dict = field(default_factory=dict)
    grammars: dict = field(default_factory=dict)
    language: Optional[str] = 'en'
    min_words: int = 40
    min_chars: int = 50
    radius_km: float = 50.0
    inventory_threshold: int = DEFAULT_THRESHOLD
    split_plan: SplitPlan = field(default_factory=SplitPlan)
    sample_size: int = SAMPLE_SIZE
    feature_spaces: tuple = ()
    primary_space: Optional[SpaceName] = None
    ngram_dim: int = DEFAULT_DIM
    c_grid: tuple = DEFAULT_C_GRID
    unmasking_rounds: int = DEFAULT_ROUNDS
    unmasking_space: Optional[SpaceName] = None
    synth: Optional[SynthConfig] = None
    source: dict = field(default_factory=dict)

    @property
    def cache_dir(self) -> Path:

        return Path(os.environ.get(CACHE_VARIABLE) or self.output_dir / '.cache')

    @property
    def digest(self) -> str:
        """sha256 of the effective configuration"""

        payload = json.dumps(self.source, sort_keys=True, default=str)

        return hashlib.sha256(payload.encode('utf-8')).hexdigest()

    def ordered_stages(self) -> list[str]:

        return [s for s in STAGES if s in self.stages]

    def input(self, key: str) -> Optional[Path]:

        return self.inputs.get(key)

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> RunConfig:
        """Load and validate a YAML configuration

        Parameters
        ----------
        path : str | Path
            Configuration file
        **overrides
            Values that replace the file's (None leaves the file's value)

        Raises
        ------
        ConfigError
            If the configuration is invalid
        """

        path = Path(path)
        with open(path, 'r', encoding='utf-8') as f:
            raw = yaml.safe_load(f)
        if not isinstance(raw, dict):
            raise ConfigError(ConfigError.not_a_mapping.format(path=path))

        return cls.from_dict(raw, base_dir=path.parent, **overrides)

    @classmethod
    def from_dict(cls, raw: Mapping[str, Any], base_dir: Path = Path('.'), **overrides) -> RunConfig:

        raw = dict(raw)
        for key, value in overrides.items():
            if value is not None:
                if key in ('rounds',):
                    raw.setdefault('unmasking', {})
                    raw['unmasking'] = {**raw['unmasking'], 'rounds': value}
                else:
                    raw[key] = value

        if raw.get('seed') is None:
            raise ConfigError(ConfigError.missing_seed)

        def resolve(p) -> Path:
            p = Path(p)
            return p if p.is_absolute() else base_dir / p

        stages = tuple(raw.get('stages', STAGES))
        for stage in stages:
            if stage not in STAGES:
                raise ConfigError(ConfigError.unknown_stage.format(stage=stage, stages=list(STAGES)))

        inputs = {}
        for key, value in (raw.get('inputs') or {}).items():
            if key not in _INPUT_KEYS:
                raise ConfigError(ConfigError.bad_value.format(
                    key=f'inputs.{key}', value=value, reason='unknown input'))
            if value is not None:
                inputs[key] = resolve(value)

        grammars = {name: resolve(p) for name, p in (raw.get('grammars') or {}).items()}

        spaces = tuple(SpaceName(s) for s in raw.get('feature_spaces', ()))
        primary = SpaceName(raw['primary_space']) if raw.get('primary_space') else \
            (spaces[0] if spaces else None)
        unmasking = raw.get('unmasking') or {}
        unmasking_space = SpaceName(unmasking['space']) if unmasking.get('space') else primary

        for space in (*spaces, primary, unmasking_space):
            if space is not None and space not in spaces:
                raise ConfigError(ConfigError.bad_value.format(
                    key='feature_spaces', value=str(space), reason='space is used but not listed'))

        try:
            split_plan = SplitPlan(**{'seed': int(raw['seed']), **(raw.get('split_plan') or {})})
        except (TypeError, SamplingError) as e:
            raise ConfigError(ConfigError.bad_value.format(
                key='split_plan', value=raw.get('split_plan'), reason=e))

        c_grid = tuple(float(c) for c in raw.get('c_grid', DEFAULT_C_GRID))
        if not c_grid or any(c <= 0 for c in c_grid):
            raise ConfigError(ConfigError.bad_value.format(
                key='c_grid', value=list(c_grid), reason='values must be positive'))

        config = cls(
            seed=int(raw['seed']),
            stages=stages,
            output_dir=resolve(raw.get('output_dir', 'output')),
            jobs=int(raw.get('jobs', 1)),
            inputs=inputs,
            grammars=grammars,
            language=raw.get('language', 'en'),
            min_words=int(raw.get('min_words', 40)),
            min_chars=int(raw.get('min_chars', 50)),
            radius_km=float(raw.get('radius_km', 50.0)),
            inventory_threshold=int(raw.get('inventory_threshold', DEFAULT_THRESHOLD)),
            split_plan=split_plan,
            sample_size=int(raw.get('sample_size', SAMPLE_SIZE)),
            feature_spaces=spaces,
            primary_space=primary,
            ngram_dim=int(raw.get('ngram_dim', DEFAULT_DIM)),
            c_grid=c_grid,
            unmasking_rounds=int(unmasking.get('rounds', DEFAULT_ROUNDS)),
            unmasking_space=unmasking_space,
            synth=_synth_config(raw.get('synth')),
            source={k: v for k, v in raw.items() if k not in ('output_dir', 'jobs', 'stages')},
        )
        config.validate()

        return config

    def validate(self) -> None:
        """Check that every referenced file exists and each stage has its inputs"""

        for key, p in self.inputs.items():
            if not p.exists():
                raise ConfigError(ConfigError.missing_path.format(key=f'inputs.{key}', path=p))
        for name, p in self.grammars.items():
            if not p.exists():
                raise ConfigError(ConfigError.missing_path.format(key=f'grammars.{name}', path=p))

        if self.jobs < 1:
            raise ConfigError(ConfigError.bad_value.format(key='jobs', value=self.jobs,
                                                           reason='must be at least 1'))
        if self.sample_size < 1:
            raise ConfigError(ConfigError.bad_value.format(key='sample_size', value=self.sample_size,
                                                           reason='must be at least 1'))
        if self.unmasking_rounds < 0:
            raise ConfigError(ConfigError.bad_value.format(
                key='unmasking.rounds', value=self.unmasking_rounds, reason='must be non-negative'))

        if 'ingest' in self.stages and not (self.input('web_dump') or self.input('social_dump')):
            raise ConfigError(ConfigError.missing_input.format(stage='ingest', key='web_dump'))
        if 'ingest' in self.stages and self.input('social_dump') and not self.input('cities'):
            raise ConfigError(ConfigError.missing_input.format(stage='ingest', key='cities'))
        if 'synth' in self.stages and self.synth is None:
            raise ConfigError(ConfigError.missing_input.format(stage='synth', key='synth'))

        # Grammars come from the files listed or, for a synthetic run, from synth
        synthetic = 'synth' in self.stages or self.synth is not None
        for space in self.feature_spaces:
            if space.grammar and space.grammar not in self.grammars and not synthetic:
                raise ConfigError(ConfigError.missing_input.format(
                    stage='featurize', key=f'grammars.{space.grammar}'))
            if space.grammar and not (self.input('lexicon') or synthetic):
                raise ConfigError(ConfigError.missing_input.format(stage='featurize', key='lexicon'))

        for stage in self.stages:
            for key in _REQUIRED_INPUTS.get(stage, ()):
                if not self.input(key) and not synthetic:
                    raise ConfigError(ConfigError.missing_input.format(stage=stage, key=key))

        if any(s in self.stages for s in ('featurize', 'train', 'unmask')) and not self.feature_spaces:
            raise ConfigError(ConfigError.missing_input.format(stage='featurize', key='feature_spaces'))

    def replace(self, **changes) -> RunConfig:

        return dataclasses.replace(self, **changes)


def _synth_config(raw: Optional[Mapping]) -> Optional[SynthConfig]:

    if raw is None:
        return None

    try:
        profiles = tuple(
            DialectProfile(
                region=str(p['region']),
                construction_probs={int(c): float(v) for c, v in (p.get('construction_probs') or {}).items()},
                lexicon_bias={str(w): float(v) for w, v in (p.get('lexicon_bias') or {}).items()},
                register_shift={int(c): float(v) for c, v in (p.get('register_shift') or {}).items()} or None,
            )
            for p in raw.get('profiles', ())
        )
    except (KeyError, TypeError, ValueError, InvalidProfile) as e:
        raise ConfigError(ConfigError.bad_value.format(key='synth.profiles', value='...', reason=e))

    return SynthConfig(profiles=profiles,
                       samples_per_region=int(raw.get('samples_per_region', 300)),
                       n_constructions=raw.get('n_constructions'))
