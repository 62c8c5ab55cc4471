from .ingest import Register, RawDocument, GeoDocument, deduplicate, ingest_web, ingest_social
from .mapping import CorpusStats, VarietyInventory, tabulate, select_inventory
from .sampling import RegionSample, Split, SplitPlan, aggregate, assign_splits
from .cxg import AnnotatedToken, SlotConstraint, Construction, Grammar, count_matches
from .classify import Dataset, LinearModel, EvalReport, train, predict, evaluate
from .experiments import ExperimentConfig, run_experiment
from .unmasking import UnmaskingCurve, unmask
from .synth import DialectProfile, generate
from .config import RunConfig
from . import features

__all__ = [
    "Register",
    "RawDocument",
    "GeoDocument",
    "deduplicate",
    "ingest_web",
    "ingest_social",
    "CorpusStats",
    "VarietyInventory",
    "tabulate",
    "select_inventory",
    "RegionSample",
    "Split",
    "SplitPlan",
    "aggregate",
    "assign_splits",
    "AnnotatedToken",
    "SlotConstraint",
    "Construction",
    "Grammar",
    "count_matches",
    "Dataset",
    "LinearModel",
    "EvalReport",
    "train",
    "predict",
    "evaluate",
    "ExperimentConfig",
    "run_experiment",
    "UnmaskingCurve",
    "unmask",
    "DialectProfile",
    "generate",
    "RunConfig",
    "features",
]
