"""Corpus-level pairing, scoring, stratification, and pathology runs.

Key and response corpora are paired by doc_id; a document present on one
side only, or with disagreeing token counts, raises DocMismatch rather
than silently distorting scores.  Pairs are processed in sorted doc_id
order, so float accumulation is reproducible run to run.

Micro averaging sums each metric's numerators and denominators across
documents before dividing; macro averaging takes the component-wise
arithmetic mean of per-document triples (F1 is averaged directly, not
recomputed from the averaged recall and precision).  Scoring functions
are pure, so documents could be scored concurrently and reduced; this
module keeps the reduction sequential and deterministic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .conll import parse_conll
from .errors import DocMismatch
from .jsonl import parse_jsonl
from .metrics import (
    MetricCounts,
    MetricId,
    MetricReport,
    PathologyReport,
    PRCounts,
    TALLY_KEYS,
    _conll_avg,
    add_counts,
    collect_counts,
    normalize_metrics,
    partition_tallies,
    recall_deltas,
    remove_spurious,
    report_from_counts,
    score_all,
    zero_counts,
)
from .model import (
    CorpusSource,
    Document,
    Partition,
    Role,
    ScoreTriple,
    SourceFormat,
    mentions_of,
)
from .stats import StatsReport, stats_report
from .stratify import (
    StratifiedReport,
    Stratum,
    StratumConfig,
    leakage_count,
    singleton_detection_counts,
    stratified_score,
    stratum_pairs,
)


class Averaging(str, Enum):
    MICRO = "micro"
    MACRO = "macro"


@dataclass(frozen=True)
class DocPair:
    document: Document
    key: Partition
    response: Partition


def pair_corpora(
    key_source: CorpusSource, response_source: CorpusSource
) -> tuple[DocPair, ...]:
    """Align two corpora by doc_id, sorted; loud failure on any mismatch."""
    key_docs = {doc.doc_id: (doc, part) for doc, part in key_source.documents}
    resp_docs = {doc.doc_id: (doc, part) for doc, part in response_source.documents}
    key_only = sorted(key_docs.keys() - resp_docs.keys())
    resp_only = sorted(resp_docs.keys() - key_docs.keys())
    if key_only or resp_only:
        parts = []
        if key_only:
            parts.append("only in key: " + ", ".join(key_only))
        if resp_only:
            parts.append("only in response: " + ", ".join(resp_only))
        raise DocMismatch(
            "unpaired documents (" + "; ".join(parts) + ")",
            doc_id=(key_only + resp_only)[0],
        )
    pairs = []
    for doc_id in sorted(key_docs):
        key_doc, key_part = key_docs[doc_id]
        resp_doc, resp_part = resp_docs[doc_id]
        if key_doc.num_tokens != resp_doc.num_tokens:
            raise DocMismatch(
                f"document {doc_id!r} has {key_doc.num_tokens} tokens in the key "
                f"but {resp_doc.num_tokens} in the response",
                doc_id=doc_id,
            )
        pairs.append(DocPair(key_doc, key_part, resp_part))
    return tuple(pairs)


def _zero_tallies() -> dict[str, int]:
    return {k: 0 for k in TALLY_KEYS}


def _sum_tallies(acc: dict[str, int], new: dict[str, int]) -> None:
    for k, v in new.items():
        acc[k] = acc.get(k, 0) + v


def _macro_triples(per_doc: Sequence[ScoreTriple]) -> ScoreTriple:
    n = len(per_doc)
    if n == 0:
        return ScoreTriple(0.0, 0.0, 0.0)
    return ScoreTriple(
        sum(t.recall for t in per_doc) / n,
        sum(t.precision for t in per_doc) / n,
        sum(t.f1 for t in per_doc) / n,
    )


def _macro_report(
    reports: Sequence[MetricReport], metrics: tuple[MetricId, ...]
) -> MetricReport:
    scores = {
        m: _macro_triples([r.scores[m] for r in reports]) for m in metrics
    }
    tallies = _zero_tallies()
    for r in reports:
        _sum_tallies(tallies, dict(r.counts))
    return MetricReport(scores, _conll_avg(scores), tallies)


def score_corpus(
    pairs: Iterable[DocPair],
    metrics: Optional[Iterable[MetricId | str]] = None,
    averaging: Averaging | str = Averaging.MICRO,
) -> MetricReport:
    """One report for a whole corpus under the chosen averaging."""
    pairs = sorted(pairs, key=lambda p: p.document.doc_id)
    wanted = normalize_metrics(metrics)
    if Averaging(averaging) is Averaging.MACRO:
        return _macro_report(
            [score_all(p.key, p.response, wanted) for p in pairs], wanted
        )
    counts: dict[MetricId, MetricCounts] = {m: zero_counts(m) for m in wanted}
    tallies = _zero_tallies()
    for pair in pairs:
        counts = add_counts(counts, collect_counts(pair.key, pair.response, wanted))
        _sum_tallies(tallies, partition_tallies(pair.key, pair.response))
    return report_from_counts(counts, tallies)


def effective_stratum_config(
    pairs: Iterable[DocPair], config: StratumConfig
) -> StratumConfig:
    """Degrade require_named when no key mention in the corpus is named."""
    if not config.require_named:
        return config
    if any(m.is_named for p in pairs for m in mentions_of(p.key)):
        return config
    warnings.warn(
        "no key mention carries is_named; require_named degraded to false "
        "for this corpus",
        UserWarning,
        stacklevel=2,
    )
    return replace(config, require_named=False)


def stratify_corpus(
    pairs: Iterable[DocPair],
    config: StratumConfig = StratumConfig(),
    metrics: Optional[Iterable[MetricId | str]] = None,
    averaging: Averaging | str = Averaging.MICRO,
) -> StratifiedReport:
    """Corpus-wide stratified report; strata accumulate across documents."""
    pairs = sorted(pairs, key=lambda p: p.document.doc_id)
    wanted = normalize_metrics(metrics)
    config = effective_stratum_config(pairs, config)

    if Averaging(averaging) is Averaging.MACRO:
        per_doc = [
            stratified_score(p.key, p.response, config, wanted) for p in pairs
        ]
        per_stratum = {}
        for stratum in Stratum:
            present = [r.per_stratum[stratum] for r in per_doc if stratum in r.per_stratum]
            if present:
                per_stratum[stratum] = _macro_report(present, wanted)
        detection = _macro_triples([r.singleton_detection for r in per_doc])
        return StratifiedReport(
            per_stratum=per_stratum,
            singleton_detection=detection,
            leakage=sum(r.leakage for r in per_doc),
            config=config,
            spurious_mentions=sum(r.spurious_mentions for r in per_doc),
        )

    counts: dict[Stratum, dict[MetricId, MetricCounts]] = {}
    tallies: dict[Stratum, dict[str, int]] = {}
    detection_counts = PRCounts()
    leakage = 0
    spurious = 0
    for pair in pairs:
        for stratum, (key_slice, resp_slice) in stratum_pairs(
            pair.key, pair.response, config
        ).items():
            counts[stratum] = add_counts(
                counts.get(stratum, {m: zero_counts(m) for m in wanted}),
                collect_counts(key_slice, resp_slice, wanted),
            )
            _sum_tallies(
                tallies.setdefault(stratum, _zero_tallies()),
                partition_tallies(key_slice, resp_slice),
            )
        detection_counts = detection_counts + singleton_detection_counts(
            pair.key, pair.response
        )
        leakage += leakage_count(pair.key, pair.response, config)
        spurious += len(mentions_of(pair.response) - mentions_of(pair.key))
    per_stratum = {
        stratum: report_from_counts(counts[stratum], tallies[stratum])
        for stratum in Stratum
        if stratum in counts
    }
    return StratifiedReport(
        per_stratum=per_stratum,
        singleton_detection=detection_counts.triple(),
        leakage=leakage,
        config=config,
        spurious_mentions=spurious,
    )


def pathology_corpus(
    pairs: Iterable[DocPair],
    metrics: Optional[Iterable[MetricId | str]] = None,
    averaging: Averaging | str = Averaging.MICRO,
) -> PathologyReport:
    """Corpus-level before/after comparison around remove_spurious."""
    pairs = sorted(pairs, key=lambda p: p.document.doc_id)
    before = score_corpus(pairs, metrics, averaging)
    cleaned = [
        DocPair(p.document, p.key, remove_spurious(p.response, p.key)) for p in pairs
    ]
    after = score_corpus(cleaned, metrics, averaging)
    return PathologyReport(
        before, after, recall_deltas(before, after), before.counts["response_spurious"]
    )


def corpus_stats_report(
    source: CorpusSource, exclude_singletons: bool = False
) -> StatsReport:
    return stats_report(source.documents, exclude_singletons)


def load_corpus(
    path: str | Path, fmt: SourceFormat | str, role: Role | str
) -> CorpusSource:
    """Read and parse one corpus file in the given format."""
    fmt = SourceFormat(fmt)
    with open(path, encoding="utf-8") as stream:
        if fmt is SourceFormat.CONLL:
            return parse_conll(stream, role)
        return parse_jsonl(stream, role)
