"""Coreference resolution evaluation.

Scoring engine for MUC, B3, CEAF (mention and entity), BLANC, LEA, and
the CoNLL average, with CoNLL-2012 and jsonl corpus parsing, stratified
evaluation of major/secondary/singleton chains, corpus statistics with a
rank-size Zipf diagnostic, and a spurious-mention pathology experiment.
The ``corefeval`` command exposes all of it from the shell.
"""

from .corpus import (
    Averaging,
    DocPair,
    corpus_stats_report,
    effective_stratum_config,
    load_corpus,
    pair_corpora,
    pathology_corpus,
    score_corpus,
    stratify_corpus,
)
from .conll import iter_conll, parse_conll
from .errors import (
    CorefEvalError,
    DocMismatch,
    DuplicateSpan,
    EmptySeries,
    MissingMetric,
    ModelError,
    ParseError,
    RangeError,
    SchemaError,
    UnbalancedBracket,
)
from .jsonl import emit_jsonl, iter_jsonl, parse_jsonl
from .metrics import (
    ALL_METRICS,
    Alignment,
    BlancCounts,
    CONLL_METRICS,
    CeafVariant,
    MetricId,
    MetricReport,
    PRCounts,
    PathologyReport,
    b_cubed,
    blanc,
    blanc_counts,
    b3_counts,
    ceaf,
    ceaf_counts,
    collect_counts,
    conll_average,
    lea,
    lea_counts,
    metric_counts,
    muc,
    muc_counts,
    optimal_alignment,
    partition_tallies,
    pathology,
    phi3,
    phi4,
    remove_spurious,
    report_from_counts,
    score_all,
)
from .model import (
    Chain,
    CorpusSource,
    Document,
    Mention,
    Partition,
    Role,
    ScoreTriple,
    SourceFormat,
    chain_of,
    f1_of,
    mentions_of,
)
from .reports import OutputFormat, csv_triple, emit_report
from .stats import (
    CorpusStats,
    StatsReport,
    ZipfFit,
    compute_stats,
    rank_size_series,
    stats_report,
    zipf_fit,
)
from .stratify import (
    StratifiedReport,
    Stratum,
    StratumConfig,
    classify_chain,
    leakage_count,
    project,
    singleton_detection,
    singleton_detection_counts,
    stratified_score,
    stratify,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_METRICS",
    "Alignment",
    "Averaging",
    "BlancCounts",
    "CONLL_METRICS",
    "CeafVariant",
    "Chain",
    "CorefEvalError",
    "CorpusSource",
    "CorpusStats",
    "DocMismatch",
    "DocPair",
    "Document",
    "DuplicateSpan",
    "EmptySeries",
    "Mention",
    "MetricId",
    "MetricReport",
    "MissingMetric",
    "ModelError",
    "OutputFormat",
    "PRCounts",
    "ParseError",
    "Partition",
    "PathologyReport",
    "RangeError",
    "Role",
    "SchemaError",
    "ScoreTriple",
    "SourceFormat",
    "StatsReport",
    "StratifiedReport",
    "Stratum",
    "StratumConfig",
    "UnbalancedBracket",
    "ZipfFit",
    "b3_counts",
    "b_cubed",
    "blanc",
    "blanc_counts",
    "ceaf",
    "ceaf_counts",
    "chain_of",
    "classify_chain",
    "collect_counts",
    "conll_average",
    "corpus_stats_report",
    "compute_stats",
    "csv_triple",
    "effective_stratum_config",
    "emit_jsonl",
    "emit_report",
    "f1_of",
    "iter_conll",
    "iter_jsonl",
    "lea",
    "lea_counts",
    "leakage_count",
    "load_corpus",
    "mentions_of",
    "metric_counts",
    "muc",
    "muc_counts",
    "optimal_alignment",
    "pair_corpora",
    "parse_conll",
    "parse_jsonl",
    "partition_tallies",
    "pathology",
    "pathology_corpus",
    "phi3",
    "phi4",
    "project",
    "rank_size_series",
    "remove_spurious",
    "report_from_counts",
    "score_all",
    "score_corpus",
    "singleton_detection",
    "singleton_detection_counts",
    "stats_report",
    "stratified_score",
    "stratify",
    "stratify_corpus",
    "zipf_fit",
]
