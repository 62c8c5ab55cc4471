"""
Command-line pipeline: each subcommand runs one stage of a configured run,
``run`` executes every configured stage in dependency order
"""

# Core imports
from __future__ import annotations
import argparse
import dataclasses
import hashlib
import logging
import sys
import warnings
from collections import Counter, defaultdict
from importlib import metadata
from pathlib import Path
from typing import Optional, Sequence

# Internal imports
from . import io
from ._version import __version__
from .classify import Dataset, LinearModel, evaluate, similarity_from_confusion, similarity_table
from .config import STAGES, RunConfig, SpaceName
from .cxg import Grammar, annotate, feature_density, read_lexicon
from .errors import ConfigError, InsufficientData, StageError
from .experiments import (ExperimentData, cross_domain_summary, cross_domain_table, feature_set_table,
                          fit_model, merged_breakdown, merged_table, per_class_table)
from .features import (CxGVectorizer, FunctionWordVectorizer, HashingVectorizer, Vectorizer,
                       read_function_words, read_vectors, write_vectors)
from .ingest import (BoilerplateFilter, CityIndex, Deduplicator, Register, ingest_social,
                     ingest_web, read_documents, read_tld_exclusions, read_tld_table,
                     write_documents)
from .mapping import inventory_table, read_regions, select_inventory, tabulate, VarietyInventory
from .sampling import (RegionSample, Split, aggregate, assign_splits, derive_seed, read_samples,
                       write_samples)
from .synth import SyntheticCorpus, generate, synthetic_grammar
from .templates import RunSummary
from .unmasking import unmask

# External imports
import pandas as pd
from tqdm.auto import tqdm

logger = logging.getLogger(__name__)

MANIFEST = 'manifest.json'
MANIFEST_FORMAT = 1

_DEPENDENCIES = ('numpy', 'pandas', 'scipy', 'scikit-learn', 'awkward', 'beautifulsoup4',
                 'PyYAML', 'tqdm')


def _versions() -> dict[str, str]:

    versions = {'dialectcxg': __version__}
    for name in _DEPENDENCIES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = 'unknown'

    return versions


class Pipeline:
    """Runs the stages of one configuration and keeps its manifest.

    Parameters
    ----------
    config : RunConfig
        Validated configuration
    progress : bool, optional
        Show progress bars. Defaults to True when stderr is a terminal.
    """

    def __init__(self, config: RunConfig, progress: bool = None):

        self.config = config
        self.out = Path(config.output_dir)
        self.progress = sys.stderr.isatty() if progress is None else progress
        self._samples = None
        self._vectorizers = {}
        self._vector_paths = {}

        self.manifest_path = self.out / MANIFEST
        if self.manifest_path.exists():
            self.manifest = io.read_json(self.manifest_path)
        else:
            self.manifest = {'stages': {}}
        self.manifest.update({
            'format': MANIFEST_FORMAT,
            'config_hash': config.digest,
            'seed': config.seed,
            'versions': _versions(),
        })

    # ------------------------------------------------------------------
    # Orchestration
    # ------------------------------------------------------------------

    def run(self, stages: Sequence[str] = None) -> int:
        """Run stages in dependency order, returning the exit status"""

        stages = [s for s in STAGES if s in (stages or self.config.stages)]
        self.out.mkdir(parents=True, exist_ok=True)

        status = 0
        for stage in stages:
            try:
                self.run_stage(stage)
            except Exception as e:
                error = e if isinstance(e, StageError) else \
                    StageError(stage, f'{type(e).__name__}: {e}')
                logger.error(str(error))
                logger.debug('Traceback', exc_info=True)
                self._record(stage, 'failed', None, [])
                status = 1
                break

        self._finish()

        return status

    def run_stage(self, stage: str) -> list[Path]:
        """Run one stage unless its recorded fingerprint is unchanged"""

        inputs = self._stage_inputs(stage)
        fingerprint = self._fingerprint(stage, inputs)

        entry = self.manifest['stages'].get(stage)
        if entry and entry['status'] == 'complete' and entry['fingerprint'] == fingerprint and \
                all((self.out / p).exists() for p in entry['artifacts']):
            logger.info('Stage %s is up to date', stage)
            return [self.out / p for p in entry['artifacts']]

        logger.info('Stage %s started', stage)
        self._record(stage, 'running', fingerprint, [])
        artifacts = getattr(self, f'_stage_{stage}')()

        self._record(stage, 'complete', fingerprint, artifacts)
        logger.info('Stage %s wrote %d artifacts', stage, len(artifacts))

        return artifacts

    def _record(self, stage: str, status: str, fingerprint: Optional[str], artifacts: list[Path]):

        self.manifest['stages'][stage] = {
            'status': status,
            'fingerprint': fingerprint or '',
            'artifacts': sorted(str(Path(p).relative_to(self.out)) for p in artifacts
                                if Path(p).is_relative_to(self.out)),
        }
        self._write_manifest()

    def _finish(self):

        statuses = [e['status'] for e in self.manifest['stages'].values()]
        if any(s in ('failed', 'running') for s in statuses):
            self.manifest['status'] = 'partial'
        else:
            self.manifest['status'] = 'complete'
        self._write_manifest()

        summary = self.out / 'summary.txt'
        with open(summary, 'w', encoding='utf-8') as f:
            f.write(RunSummary.render(self.manifest))

    def _write_manifest(self):

        self.manifest.setdefault('status', 'partial')
        io.write_json(self.manifest, self.manifest_path)

    def _fingerprint(self, stage: str, inputs: Sequence[Path]) -> str:

        h = hashlib.sha256()
        h.update(self.config.digest.encode('utf-8'))
        h.update(stage.encode('utf-8'))
        for path in inputs:
            h.update(io.file_digest(path).encode('utf-8'))

        return h.hexdigest()

    def _need(self, stage: str, path: Path, needs: str) -> Path:

        if not path.exists():
            raise StageError(stage, StageError.missing_artifact.format(
                stage=stage, path=path, needs=needs))

        return path

    def _stage_inputs(self, stage: str) -> list[Path]:
        """Files a stage reads; their digests make up its fingerprint"""

        config = self.config
        if stage == 'ingest':
            return [p for p in config.inputs.values()]
        if stage == 'map':
            regions = [config.input('regions')] if config.input('regions') else []
            return [self._need(stage, self.documents_path, 'ingest'), *regions]
        if stage == 'sample':
            return [self._need(stage, self.documents_path, 'ingest'),
                    self._need(stage, self.inventory_path, 'map')]
        if stage == 'synth':
            return []

        samples = self._need(stage, self.samples_path, 'sample or synth')
        if stage == 'featurize':
            return [samples, *self._resource_paths()]
        if stage == 'density':
            return [samples, *self._resource_paths(grammars_only=True)]

        spaces = self.config.feature_spaces
        if stage == 'unmask':
            spaces = self._unmasking_spaces()
        vectors = [self._need(stage, self.vector_path(s), 'featurize') for s in spaces]
        if stage in ('train', 'crossdomain', 'unmask'):
            return [samples, *vectors]
        if stage == 'eval':
            return [samples, *vectors, *(self._need(stage, self.model_path(s, r), 'train')
                                         for s in spaces for r in self.registers)]
        if stage == 'similarity':
            return [self._need(stage, self.report_stem('within', config.primary_space, r)
                               .with_suffix('.json'), 'eval') for r in self.registers]

        raise ValueError(f'Unknown stage {stage}')

    # ------------------------------------------------------------------
    # Paths and shared inputs
    # ------------------------------------------------------------------

    @property
    def documents_path(self) -> Path:

        return self.out / 'documents.jsonl'

    @property
    def inventory_path(self) -> Path:

        return self.out / 'inventory.txt'

    @property
    def samples_path(self) -> Path:

        return self.out / 'samples.jsonl'

    @property
    def synth_dir(self) -> Path:

        return self.out / 'synth'

    def model_path(self, space: SpaceName, register: Optional[Register]) -> Path:

        suffix = register.value if register else 'merged'
        return self.out / 'models' / f'{space.stem}_{suffix}.json'

    def report_stem(self, kind: str, space: SpaceName, *parts: str) -> Path:

        name = '_'.join([kind, space.stem, *(str(getattr(p, 'value', p)) for p in parts)])
        return self.out / 'reports' / name

    def samples(self) -> list[RegionSample]:

        if self._samples is None:
            self._samples = list(read_samples(self.samples_path))

        return self._samples

    @property
    def registers(self) -> list[Register]:
        """Registers that have samples, in canonical order"""

        present = {s.register for s in self.samples()}
        return [r for r in Register if r in present]

    def _grammar_path(self, name: str) -> Path:

        if name in self.config.grammars:
            return self.config.grammars[name]

        return self.synth_dir / f'{name}.txt'

    def _lexicon_path(self) -> Path:

        return self.config.input('lexicon') or self.synth_dir / 'lexicon.tsv'

    def _resource_paths(self, grammars_only: bool = False) -> list[Path]:

        paths = []
        names = self._grammar_names() if grammars_only else \
            [s.grammar for s in self.config.feature_spaces if s.grammar]
        for name in names:
            paths.append(self._need('featurize', self._grammar_path(name), 'synth'))
        if names:
            paths.append(self._need('featurize', self._lexicon_path(), 'synth'))
        if not grammars_only and self.config.input('function_words'):
            paths.append(self.config.input('function_words'))

        return paths

    def _grammar_names(self) -> list[str]:

        names = list(self.config.grammars)
        for space in self.config.feature_spaces:
            if space.grammar and space.grammar not in names:
                names.append(space.grammar)

        return names

    def vectorizer(self, space: SpaceName) -> Vectorizer:

        if space not in self._vectorizers:
            if space.grammar:
                grammar = Grammar.from_file(self._grammar_path(space.grammar), space.grammar)
                vectorizer = CxGVectorizer(grammar, read_lexicon(self._lexicon_path()))
            elif space.n:
                vectorizer = HashingVectorizer(space.n, self.config.ngram_dim)
            else:
                vectorizer = FunctionWordVectorizer(
                    read_function_words(self.config.input('function_words')))
            self._vectorizers[space] = vectorizer

        return self._vectorizers[space]

    def vector_path(self, space: SpaceName) -> Path:
        """Cache location of a space's vectors, keyed by everything they depend on"""

        if space not in self._vector_paths:
            h = hashlib.sha256()
            h.update(io.file_digest(self.samples_path).encode('utf-8'))
            h.update(str(space).encode('utf-8'))
            h.update(str(self.config.ngram_dim).encode('utf-8'))
            if space.grammar:
                for path in (self._grammar_path(space.grammar), self._lexicon_path()):
                    h.update(io.file_digest(path).encode('utf-8'))
            elif space.n is None and self.config.input('function_words'):
                h.update(io.file_digest(self.config.input('function_words')).encode('utf-8'))
            self._vector_paths[space] = self.config.cache_dir / f'{space.stem}-{h.hexdigest()[:16]}.vec'

        return self._vector_paths[space]

    def experiment_data(self, space: SpaceName) -> ExperimentData:
        """Datasets of one space keyed by (register, split)"""

        vectors = dict(read_vectors(self.vector_path(space)))
        feature_space = self.vectorizer(space).space

        groups = defaultdict(list)
        for sample in self.samples():
            if sample.split is not None:
                groups[(sample.register, sample.split)].append(sample)

        return {
            key: Dataset.from_vectors([vectors[s.sample_id] for s in group],
                                      [s.region for s in group], feature_space,
                                      [s.sample_id for s in group])
            for key, group in groups.items()
        }

    def _unmasking_spaces(self) -> list[SpaceName]:

        spaces = [self.config.unmasking_space]
        baseline = SpaceName('unigrams')
        if baseline in self.config.feature_spaces and baseline not in spaces:
            spaces.append(baseline)

        return spaces

    def _bar(self, iterable, desc: str, total: int = None):

        return tqdm(iterable, desc=desc, total=total, disable=not self.progress)

    # ------------------------------------------------------------------
    # Stages
    # ------------------------------------------------------------------

    def _stage_ingest(self) -> list[Path]:

        config = self.config
        tld_table = read_tld_table(config.input('tld_table'))
        exclusions = read_tld_exclusions(config.input('tld_exclusions'))
        boilerplate = BoilerplateFilter.from_file(config.input('boilerplate'))

        web_stats, social_stats = Counter(), Counter()
        streams = []
        if config.input('web_dump'):
            streams.append(ingest_web(io.read_jsonl(config.input('web_dump')), tld_table,
                                      exclusions, boilerplate, config.min_words,
                                      language=config.language, stats=web_stats))
        if config.input('social_dump'):
            cities = CityIndex.from_file(config.input('cities'))
            streams.append(ingest_social(io.read_jsonl(config.input('social_dump')), cities,
                                         config.radius_km, config.min_chars,
                                         language=config.language, stats=social_stats))

        dedup = Deduplicator()
        docs = (doc for stream in streams for doc in stream)
        n = write_documents(dedup(self._bar(docs, 'Ingesting')), self.documents_path)
        logger.info('Kept %d documents after deduplication', n)

        stats_path = self.out / 'ingest_stats.json'
        io.write_json({'web': dict(web_stats), 'social': dict(social_stats),
                       'duplicates': dict(dedup.removed), 'documents': n}, stats_path)

        return [self.documents_path, stats_path]

    def _stage_map(self) -> list[Path]:

        stats = tabulate(read_documents(self.documents_path))
        inventory = select_inventory(stats, self.config.inventory_threshold)
        logger.info('Selected %d of %d countries at %d words', len(inventory),
                    len(stats.countries), inventory.threshold)

        artifacts = [self.out / 'corpus_stats.csv', self.inventory_path, self.out / 'inventory.csv']
        stats.to_csv(artifacts[0])
        inventory.to_file(artifacts[1])
        io.write_frame(inventory_table(stats, inventory), artifacts[2])

        regions = read_regions(self.config.input('regions') or io.data_path('regions.csv'))
        artifacts.append(self.out / 'regions.csv')
        io.write_frame(stats.by_region(regions), artifacts[-1])

        return artifacts

    def _split_groups(self, groups: dict) -> list[RegionSample]:
        """Assign splits per (region, register); regions too small in any
        register are dropped"""

        assigned, rejected = {}, set()
        for (region, register), samples in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
            plan = dataclasses.replace(self.config.split_plan, seed=derive_seed(
                self.config.split_plan.seed, region, register.value, 'split'))
            try:
                assigned[(region, register)] = assign_splits(samples, plan)
            except InsufficientData as e:
                logger.warning('Dropping region %s: %s', region, e)
                rejected.add(region)

        return [s for (region, _), samples in assigned.items() if region not in rejected
                for s in samples]

    def _write_split_counts(self, samples: Sequence[RegionSample]) -> Path:

        counts = Counter((s.region, s.register.value, s.split.value) for s in samples)
        rows = sorted({(region, register) for region, register, _ in counts})
        frame = pd.DataFrame(
            [(region, register, *(counts[(region, register, split.value)] for split in Split))
             for region, register in rows],
            columns=['country', 'register', *(split.value for split in Split)])

        path = self.out / 'split_counts.csv'
        io.write_frame(frame, path)

        return path

    def _stage_sample(self) -> list[Path]:

        inventory = VarietyInventory.from_file(self.inventory_path, self.config.inventory_threshold)

        docs = defaultdict(list)
        for doc in read_documents(self.documents_path):
            if doc.country in inventory:
                docs[(doc.country, doc.register)].append(doc)

        groups = {}
        for (region, register), group in self._bar(sorted(docs.items(), key=lambda kv: (kv[0][0], kv[0][1].value)),
                                                   'Sampling'):
            groups[(region, register)] = aggregate(
                group, derive_seed(self.config.seed, region, register.value),
                self.config.sample_size)

        samples = self._split_groups(groups)
        write_samples(samples, self.samples_path)
        self._samples = None
        logger.info('Wrote %d samples', len(samples))

        return [self.samples_path, self._write_split_counts(samples)]

    def _stage_synth(self) -> list[Path]:

        synth = self.config.synth
        grammar = synthetic_grammar(synth.n_constructions) if synth.n_constructions else None

        groups, corpus = {}, None
        for register in Register:
            corpus = generate(synth.profiles, synth.samples_per_region, self.config.seed,
                              register, self.config.sample_size, grammar)
            grammar = corpus.grammar
            for sample in corpus.samples:
                groups.setdefault((sample.region, sample.register), []).append(sample)

        samples = self._split_groups(groups)
        write_samples(samples, self.samples_path)
        self._samples = None

        paths = SyntheticCorpus(samples, corpus.lexicon, grammar).write(self.synth_dir)
        logger.info('Generated %d synthetic samples', len(samples))

        return [self.samples_path, *paths.values(),
                self._write_split_counts(samples)]

    def _stage_featurize(self) -> list[Path]:

        samples = self.samples()
        for space in self.config.feature_spaces:
            path = self.vector_path(space)
            if path.exists():
                logger.info('Vectors for %s found in cache', space)
                continue
            vectors = self.vectorizer(space).transform_many(
                [s.tokens for s in self._bar(samples, f'Featurizing {space}')], jobs=self.config.jobs)
            write_vectors(((s.sample_id, v) for s, v in zip(samples, vectors)), path)
            logger.info('Wrote %d vectors for %s', len(vectors), space)

        # Vectors live in the cache, outside the run's artifacts
        return []

    def _stage_train(self) -> list[Path]:

        artifacts = []
        for space in self.config.feature_spaces:
            data = self.experiment_data(space)
            for register in self.registers:
                model = fit_model(data, (register,), self.config.c_grid, self.config.seed,
                                  self.config.jobs)
                path = self.model_path(space, register)
                model.to_file(path)
                logger.info('Trained %s on %s with C=%g', space, register.value, model.C)
                artifacts.append(path)

        return artifacts

    def _stage_eval(self) -> list[Path]:

        reports, artifacts = {}, []
        for space in self.config.feature_spaces:
            data = self.experiment_data(space)
            for register in self.registers:
                model = LinearModel.from_file(self.model_path(space, register))
                report = evaluate(model, data[(register, Split.TEST)])
                stem = self.report_stem('within', space, register)
                report.write(stem)
                artifacts.extend(_report_files(stem))
                reports[(space, register)] = report
                logger.info('%s on %s: weighted F1 %.4f', space, register.value, report.f1)

        table = feature_set_table({(self.vectorizer(s).space, r): rep for (s, r), rep in reports.items()})
        artifacts.append(self.out / 'feature_sets.csv')
        io.write_frame(table, artifacts[-1])

        primary = self.config.primary_space
        artifacts.append(self.out / 'per_class.csv')
        io.write_frame(per_class_table({r.value: reports[(primary, r)] for r in self.registers}),
                       artifacts[-1])

        return artifacts

    def _stage_crossdomain(self) -> list[Path]:

        registers = self.registers
        if len(registers) < 2:
            raise StageError('crossdomain', 'Cross-domain experiments need samples from both registers')

        artifacts, cross = [], {}
        for space in self.config.feature_spaces:
            data = self.experiment_data(space)
            for train_register in registers:
                model = LinearModel.from_file(
                    self._need('crossdomain', self.model_path(space, train_register), 'train'))
                for test_register in registers:
                    if test_register is train_register:
                        continue
                    report = evaluate(model, data[(test_register, Split.TEST)])
                    stem = self.report_stem('cross', space, train_register, test_register)
                    report.write(stem)
                    artifacts.extend(_report_files(stem))
                    cross[(space, train_register, test_register)] = report
                    logger.info('%s trained on %s, tested on %s: weighted F1 %.4f',
                                space, train_register.value, test_register.value, report.f1)

        space = self.config.primary_space
        artifacts.append(self.out / 'cross_domain.csv')
        io.write_frame(cross_domain_table({(a, b): r for (s, a, b), r in cross.items() if s == space}),
                       artifacts[-1])
        artifacts.append(self.out / 'cross_domain_summary.csv')
        io.write_frame(cross_domain_summary({(self.vectorizer(s).space, a, b): r
                                             for (s, a, b), r in cross.items()}), artifacts[-1])

        data = self.experiment_data(space)
        model = fit_model(data, tuple(registers), self.config.c_grid, self.config.seed, self.config.jobs)
        model.to_file(self.model_path(space, None))
        artifacts.append(self.model_path(space, None))

        union = evaluate(model, Dataset.concat([data[(r, Split.TEST)] for r in registers]))
        stem = self.report_stem('merged', space)
        union.write(stem)
        artifacts.extend(_report_files(stem))
        artifacts.append(self.out / 'merged.csv')
        io.write_frame(merged_table(union), artifacts[-1])

        artifacts.append(self.out / 'merged_by_register.csv')
        io.write_frame(per_class_table({r.value: rep for r, rep in merged_breakdown(model, data).items()}),
                       artifacts[-1])
        logger.info('Merged registers: weighted F1 %.4f', union.f1)

        return artifacts

    def _stage_density(self) -> list[Path]:

        lexicon = read_lexicon(self._lexicon_path())
        by_region = defaultdict(list)
        for sample in self.samples():
            by_region[sample.region].append(sample)

        columns = {}
        for name in self._grammar_names():
            grammar = Grammar.from_file(self._grammar_path(name), name)
            annotated = {region: [annotate(s.tokens, lexicon) for s in samples]
                         for region, samples in sorted(by_region.items())}
            columns[name] = feature_density(grammar, annotated)

        frame = pd.DataFrame(columns)
        frame.index.name = 'region'
        path = self.out / 'density.csv'
        io.write_frame(frame.reset_index(), path)

        return [path]

    def _stage_unmask(self) -> list[Path]:

        artifacts = []
        for space in self._unmasking_spaces():
            data = self.experiment_data(space)
            for register in self.registers:
                curve = unmask(data[(register, Split.TRAIN)], data[(register, Split.TEST)],
                               self.config.unmasking_rounds, dev=data[(register, Split.DEV)],
                               c_grid=self.config.c_grid, seed=self.config.seed,
                               jobs=self.config.jobs, progress=self.progress)
                stem = self.out / f'unmasking_{space.stem}_{register.value}'
                curve.write(stem)
                artifacts.extend([Path(f'{stem}.csv'), Path(f'{stem}_removed.csv')])
                logger.info('Unmasking %s on %s: F1 %.4f to %.4f over %d rounds, %d removed',
                            space, register.value, curve.f1[0], curve.f1[-1], len(curve) - 1,
                            curve.removed_total)

        return artifacts

    def _stage_similarity(self) -> list[Path]:

        artifacts = []
        for register in self.registers:
            report = io.read_json(self.report_stem('within', self.config.primary_space, register)
                                  .with_suffix('.json'))
            similarity = similarity_from_confusion(report['confusion'], report['classes'])
            path = self.out / f'similarity_{register.value}.csv'
            io.write_frame(similarity_table(similarity), path)
            artifacts.append(path)

        return artifacts


def _report_files(stem: Path) -> list[Path]:

    return [Path(f'{stem}.json'), Path(f'{stem}.csv'), Path(f'{stem}_confusion.csv')]


def _configure_logging(verbosity: int) -> None:

    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    logging.captureWarnings(True)


def build_parser() -> argparse.ArgumentParser:

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('config', type=Path, help='YAML run configuration')
    common.add_argument('--seed', type=int, help='Override the configured seed')
    common.add_argument('--output', type=Path, help='Override the output directory')
    common.add_argument('--jobs', type=int, help='Maximum worker processes')
    common.add_argument('--threshold', type=int, help='Override the inventory threshold (words)')
    common.add_argument('--rounds', type=int, help='Override the number of unmasking rounds')
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for progress messages, -vv for debugging')

    parser = argparse.ArgumentParser(
        prog='dialectcxg', description='Dialect identification with construction grammars')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('run', parents=[common], help='Run every configured stage in order')
    help_text = {
        'ingest': 'Geo-reference, filter and deduplicate the input dumps',
        'map': 'Tabulate words per country and select the variety inventory',
        'sample': 'Aggregate fixed-size samples and assign splits',
        'synth': 'Generate a synthetic corpus, grammar and lexicon',
        'featurize': 'Vectorize samples in every configured feature space',
        'train': 'Train within-domain models',
        'eval': 'Evaluate within-domain models',
        'crossdomain': 'Run the cross-domain and merged-domain experiments',
        'density': 'Relative feature density per region and grammar',
        'unmask': 'Unmasking curves',
        'similarity': 'Variety similarity from confusion counts',
    }
    for stage in STAGES:
        commands.add_parser(stage, parents=[common], help=help_text[stage])

    return parser


def main(argv: Sequence[str] = None) -> int:
    """Entry point; returns 0 on success, 1 on a stage failure and 2 on an
    invalid configuration"""

    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    overrides = {
        'seed': args.seed,
        'output_dir': str(args.output.resolve()) if args.output else None,
        'jobs': args.jobs,
        'inventory_threshold': args.threshold,
        'rounds': args.rounds,
    }
    if args.command != 'run':
        overrides['stages'] = [args.command]

    try:
        config = RunConfig.from_file(args.config, **overrides)
    except (ConfigError, OSError) as e:
        logger.error('Invalid configuration: %s', e)
        print(f'dialectcxg: invalid configuration: {e}', file=sys.stderr)
        return 2

    with warnings.catch_warnings():
        warnings.simplefilter('default')
        return Pipeline(config).run()
