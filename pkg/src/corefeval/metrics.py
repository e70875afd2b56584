"""Coreference metrics: MUC, B3, CEAF, BLANC, LEA, and the CoNLL average.

Every scoring operation is a pure function of two immutable partitions
over the same document.  Each metric is expressed as addable recall and
precision counts (numerators and denominators) so multi-document corpora
can be micro-averaged by summing counts before dividing; the triples
returned here are the single-document case of the same reduction.

Conventions shared by all metrics:
  - 0/0 ratios evaluate to 0.
  - Recall and precision are role-dual: precision(key, response) equals
    recall(response, key) for MUC, B3, CEAF, and LEA.
  - Mention identity is the (doc_id, start, end) span; metadata never
    affects scores.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping, Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import MissingMetric
from .model import (
    Chain,
    Partition,
    ScoreTriple,
    ZERO_TRIPLE,
    check_same_doc,
    mentions_of,
)


class MetricId(str, Enum):
    MUC = "muc"
    B3 = "b3"
    CEAF_M = "ceaf_m"
    CEAF_E = "ceaf_e"
    BLANC = "blanc"
    LEA = "lea"


ALL_METRICS: tuple[MetricId, ...] = tuple(MetricId)
CONLL_METRICS: tuple[MetricId, ...] = (MetricId.MUC, MetricId.B3, MetricId.CEAF_E)


class CeafVariant(str, Enum):
    MENTION = "mention"
    ENTITY = "entity"


@dataclass(frozen=True)
class PRCounts:
    """Addable numerators/denominators for one recall/precision pair."""

    r_num: float = 0.0
    r_den: float = 0.0
    p_num: float = 0.0
    p_den: float = 0.0

    def __add__(self, other: "PRCounts") -> "PRCounts":
        return PRCounts(
            self.r_num + other.r_num,
            self.r_den + other.r_den,
            self.p_num + other.p_num,
            self.p_den + other.p_den,
        )

    @property
    def recall(self) -> float:
        return self.r_num / self.r_den if self.r_den else 0.0

    @property
    def precision(self) -> float:
        return self.p_num / self.p_den if self.p_den else 0.0

    @property
    def is_empty(self) -> bool:
        return self.r_den == 0 and self.p_den == 0

    def triple(self) -> ScoreTriple:
        return ScoreTriple.from_rp(self.recall, self.precision)


@dataclass(frozen=True)
class BlancCounts:
    """BLANC's two link categories; the fallback rule lives in triple()."""

    coref: PRCounts = PRCounts()
    noncoref: PRCounts = PRCounts()

    def __add__(self, other: "BlancCounts") -> "BlancCounts":
        return BlancCounts(self.coref + other.coref, self.noncoref + other.noncoref)

    def triple(self) -> ScoreTriple:
        # A category participates if either side has links of that kind.
        # When one category is empty on both sides the other stands alone.
        if self.coref.is_empty and self.noncoref.is_empty:
            return ZERO_TRIPLE
        if self.noncoref.is_empty:
            return self.coref.triple()
        if self.coref.is_empty:
            return self.noncoref.triple()
        c, n = self.coref.triple(), self.noncoref.triple()
        return ScoreTriple(
            (c.recall + n.recall) / 2.0,
            (c.precision + n.precision) / 2.0,
            (c.f1 + n.f1) / 2.0,
        )


MetricCounts = PRCounts | BlancCounts


def _pairs(n: int) -> int:
    return n * (n - 1) // 2


def _overlap_counter(chain: Chain, other: Partition) -> Counter:
    """Sizes of this chain's intersections with each chain of ``other``."""
    by_mention = other.chain_by_mention
    counts: Counter = Counter()
    for m in chain.mentions:
        target = by_mention.get(m)
        if target is not None:
            counts[target.chain_id] += 1
    return counts


def _muc_half(a: Partition, b: Partition) -> tuple[int, int]:
    """MUC recall counts of ``b`` measured against side ``a``.

    Each a-chain is partitioned by the b-chains; mentions covered by no
    b-chain count as their own blocks.  Singleton a-chains contribute 0
    to both counts.
    """
    num = den = 0
    by_b = b.chain_by_mention
    for chain in a.chains:
        n = len(chain)
        if n < 2:
            continue
        covering: set[str] = set()
        missing = 0
        for m in chain.mentions:
            target = by_b.get(m)
            if target is None:
                missing += 1
            else:
                covering.add(target.chain_id)
        blocks = len(covering) + missing
        num += n - blocks
        den += n - 1
    return num, den


def muc_counts(key: Partition, response: Partition) -> PRCounts:
    check_same_doc(key, response)
    r_num, r_den = _muc_half(key, response)
    p_num, p_den = _muc_half(response, key)
    return PRCounts(r_num, r_den, p_num, p_den)


def muc(key: Partition, response: Partition) -> ScoreTriple:
    """Link-based score counting the minimum missing/extra links."""
    return muc_counts(key, response).triple()


def _b3_half(a: Partition, b: Partition) -> tuple[float, int]:
    """Sum over a-mentions of |A(m) ∩ B(m)| / |A(m)|, and the mention count.

    Grouped per chain: mentions of A falling in the same b-chain share the
    same term, so the per-chain sum is sum_j |A ∩ B_j|^2 / |A|.
    """
    num = 0.0
    den = 0
    for chain in a.chains:
        n = len(chain)
        den += n
        overlap = _overlap_counter(chain, b)
        num += sum(v * v for v in overlap.values()) / n
    return num, den


def b3_counts(key: Partition, response: Partition) -> PRCounts:
    check_same_doc(key, response)
    r_num, r_den = _b3_half(key, response)
    p_num, p_den = _b3_half(response, key)
    return PRCounts(r_num, r_den, p_num, p_den)


def b_cubed(key: Partition, response: Partition) -> ScoreTriple:
    """Per-mention overlap score; correctly isolated singletons score 1."""
    return b3_counts(key, response).triple()


def phi3(k: Chain, r: Chain) -> float:
    """CEAF mention similarity: size of the span intersection."""
    return float(len(k.mention_set & r.mention_set))


def phi4(k: Chain, r: Chain) -> float:
    """CEAF entity similarity: 2|K∩R| / (|K|+|R|); phi4(K, K) = 1."""
    return 2.0 * len(k.mention_set & r.mention_set) / (len(k) + len(r))


@dataclass(frozen=True)
class Alignment:
    """A one-to-one chain matching and its total similarity.

    Zero-similarity matched pairs are retained; ``total_similarity`` is an
    exactly rounded sum (math.fsum), so equal-value optima on transposed
    inputs produce bitwise-equal totals.
    """

    pairs: tuple[tuple[str, str], ...]
    total_similarity: float


def optimal_alignment(
    key: Partition,
    response: Partition,
    phi: Callable[[Chain, Chain], float],
) -> Alignment:
    """Maximum-total-similarity one-to-one alignment of chains.

    Solved as a rectangular assignment problem; rows and columns follow the
    canonical chain-id order of each partition, which fixes tie-breaking.
    """
    key_chains, resp_chains = key.chains, response.chains
    if not key_chains or not resp_chains:
        return Alignment((), 0.0)
    sim = np.zeros((len(key_chains), len(resp_chains)))
    for i, kc in enumerate(key_chains):
        for j, rc in enumerate(resp_chains):
            sim[i, j] = phi(kc, rc)
    rows, cols = linear_sum_assignment(sim, maximize=True)
    pairs = tuple(
        (key_chains[i].chain_id, resp_chains[j].chain_id)
        for i, j in zip(rows, cols)
    )
    total = math.fsum(sim[i, j] for i, j in zip(rows, cols))
    return Alignment(pairs, total)


def ceaf_counts(
    key: Partition, response: Partition, variant: CeafVariant | str
) -> PRCounts:
    check_same_doc(key, response)
    variant = CeafVariant(variant)
    if variant is CeafVariant.MENTION:
        phi = phi3
        r_den: float = len(mentions_of(key))
        p_den: float = len(mentions_of(response))
    else:
        phi = phi4
        r_den = len(key.chains)
        p_den = len(response.chains)
    total = optimal_alignment(key, response, phi).total_similarity
    return PRCounts(total, r_den, total, p_den)


def ceaf(
    key: Partition, response: Partition, variant: CeafVariant | str
) -> ScoreTriple:
    """Entity-alignment score; ``variant`` selects phi3 (mention) or phi4 (entity)."""
    return ceaf_counts(key, response, variant).triple()


def blanc_counts(key: Partition, response: Partition) -> BlancCounts:
    """Coref and non-coref link counts over each side's own mentions.

    The non-coref intersection is counted by inclusion-exclusion over the
    shared mentions: pairs neither side links = all shared pairs minus
    pairs linked in key minus pairs linked in response plus pairs linked
    in both.
    """
    check_same_doc(key, response)
    key_mentions = mentions_of(key)
    resp_mentions = mentions_of(response)
    shared = key_mentions & resp_mentions

    coref_key = sum(_pairs(len(c)) for c in key.chains)
    coref_resp = sum(_pairs(len(c)) for c in response.chains)
    coref_both = 0
    for chain in key.chains:
        overlap = _overlap_counter(chain, response)
        coref_both += sum(_pairs(v) for v in overlap.values())

    shared_pairs = _pairs(len(shared))
    key_linked_shared = sum(
        _pairs(len(c.mention_set & resp_mentions)) for c in key.chains
    )
    resp_linked_shared = sum(
        _pairs(len(c.mention_set & key_mentions)) for c in response.chains
    )
    noncoref_both = shared_pairs - key_linked_shared - resp_linked_shared + coref_both
    noncoref_key = _pairs(len(key_mentions)) - coref_key
    noncoref_resp = _pairs(len(resp_mentions)) - coref_resp

    return BlancCounts(
        coref=PRCounts(coref_both, coref_key, coref_both, coref_resp),
        noncoref=PRCounts(noncoref_both, noncoref_key, noncoref_both, noncoref_resp),
    )


def blanc(key: Partition, response: Partition) -> ScoreTriple:
    """Rand-style average over coref and non-coref link categories."""
    return blanc_counts(key, response).triple()


def _lea_half(a: Partition, b: Partition) -> tuple[float, int]:
    """Size-weighted resolution of a-entities by b, and the total weight.

    link(e) = C(|e|, 2) for |e| >= 2; a singleton is resolved (self-link)
    only if its mention appears as a singleton in ``b``.
    """
    num = 0.0
    den = 0
    b_singletons = b.singleton_mentions
    for chain in a.chains:
        n = len(chain)
        den += n
        if n == 1:
            if chain.mentions[0] in b_singletons:
                num += 1.0
            continue
        overlap = _overlap_counter(chain, b)
        hits = sum(_pairs(v) for v in overlap.values())
        num += n * (hits / _pairs(n))
    return num, den


def lea_counts(key: Partition, response: Partition) -> PRCounts:
    check_same_doc(key, response)
    r_num, r_den = _lea_half(key, response)
    p_num, p_den = _lea_half(response, key)
    return PRCounts(r_num, r_den, p_num, p_den)


def lea(key: Partition, response: Partition) -> ScoreTriple:
    """Link-based entity-aware score weighting each entity by its size."""
    return lea_counts(key, response).triple()


def metric_counts(
    metric: MetricId | str, key: Partition, response: Partition
) -> MetricCounts:
    metric = MetricId(metric)
    if metric is MetricId.MUC:
        return muc_counts(key, response)
    if metric is MetricId.B3:
        return b3_counts(key, response)
    if metric is MetricId.CEAF_M:
        return ceaf_counts(key, response, CeafVariant.MENTION)
    if metric is MetricId.CEAF_E:
        return ceaf_counts(key, response, CeafVariant.ENTITY)
    if metric is MetricId.BLANC:
        return blanc_counts(key, response)
    return lea_counts(key, response)


def zero_counts(metric: MetricId) -> MetricCounts:
    return BlancCounts() if metric is MetricId.BLANC else PRCounts()


def normalize_metrics(metrics: Optional[Iterable[MetricId | str]]) -> tuple[MetricId, ...]:
    """Requested metrics in canonical order, defaulting to all six."""
    if metrics is None:
        return ALL_METRICS
    wanted = {MetricId(m) for m in metrics}
    return tuple(m for m in ALL_METRICS if m in wanted)


def collect_counts(
    key: Partition,
    response: Partition,
    metrics: Optional[Iterable[MetricId | str]] = None,
) -> dict[MetricId, MetricCounts]:
    return {m: metric_counts(m, key, response) for m in normalize_metrics(metrics)}


def add_counts(
    acc: dict[MetricId, MetricCounts], new: Mapping[MetricId, MetricCounts]
) -> dict[MetricId, MetricCounts]:
    return {m: acc.get(m, zero_counts(m)) + c for m, c in new.items()}


TALLY_KEYS = (
    "key_mentions",
    "response_mentions",
    "key_chains",
    "response_chains",
    "key_singletons",
    "response_singletons",
    "response_spurious",
)


def partition_tallies(key: Partition, response: Partition) -> dict[str, int]:
    """Mention/chain/singleton counts, plus response mentions missing from the key."""
    key_mentions = mentions_of(key)
    resp_mentions = mentions_of(response)
    return {
        "key_mentions": len(key_mentions),
        "response_mentions": len(resp_mentions),
        "key_chains": len(key.chains),
        "response_chains": len(response.chains),
        "key_singletons": sum(1 for c in key.chains if c.is_singleton),
        "response_singletons": sum(1 for c in response.chains if c.is_singleton),
        "response_spurious": len(resp_mentions - key_mentions),
    }


@dataclass(frozen=True)
class MetricReport:
    """Scores for the requested metrics plus corpus counts.

    ``conll_average`` is the mean F1 of muc, b3, and ceaf_e; it is None
    when any of those three was not computed.  ``counts['key_chains']``
    counts all chains including singletons.
    """

    scores: Mapping[MetricId, ScoreTriple]
    conll_average: Optional[float]
    counts: Mapping[str, int]


def _conll_avg(scores: Mapping[MetricId, ScoreTriple]) -> Optional[float]:
    if any(m not in scores for m in CONLL_METRICS):
        return None
    return sum(scores[m].f1 for m in CONLL_METRICS) / len(CONLL_METRICS)


def report_from_counts(
    counts: Mapping[MetricId, MetricCounts], tallies: Mapping[str, int]
) -> MetricReport:
    scores = {m: counts[m].triple() for m in ALL_METRICS if m in counts}
    return MetricReport(scores, _conll_avg(scores), dict(tallies))


def conll_average(report: MetricReport) -> float:
    """Mean F1 of muc, b3, and ceaf_e; raises when any is absent."""
    missing = [m.value for m in CONLL_METRICS if m not in report.scores]
    if missing:
        raise MissingMetric(f"conll average needs {', '.join(missing)}")
    avg = _conll_avg(report.scores)
    assert avg is not None
    return avg


def score_all(
    key: Partition,
    response: Partition,
    metrics: Optional[Iterable[MetricId | str]] = None,
) -> MetricReport:
    """All requested metrics side by side, plus the CoNLL average and counts."""
    check_same_doc(key, response)
    return report_from_counts(
        collect_counts(key, response, metrics), partition_tallies(key, response)
    )


def remove_spurious(response: Partition, key: Partition) -> Partition:
    """Delete response mentions absent from the key; drop emptied chains.

    Chain ids are preserved; kept mentions are the response's own objects,
    so their metadata survives.
    """
    check_same_doc(key, response)
    keep = mentions_of(key)
    chains = []
    for chain in response.chains:
        kept = [m for m in chain.mentions if m in keep]
        if kept:
            chains.append(Chain(chain.chain_id, kept))
    return Partition(response.doc_id, chains, response.role)


@dataclass(frozen=True)
class PathologyReport:
    """Scores before and after spurious-mention removal.

    ``recall_deltas`` holds after-minus-before recall per metric; MUC's
    delta is exactly 0 on every input.  ``removed_mentions`` counts the
    response mentions deleted.
    """

    before: MetricReport
    after: MetricReport
    recall_deltas: Mapping[MetricId, float]
    removed_mentions: int


def recall_deltas(
    before: MetricReport, after: MetricReport
) -> dict[MetricId, float]:
    return {
        m: after.scores[m].recall - before.scores[m].recall
        for m in before.scores
        if m in after.scores
    }


def pathology(
    key: Partition,
    response: Partition,
    metrics: Optional[Iterable[MetricId | str]] = None,
) -> PathologyReport:
    """Score, strip spurious response mentions, rescore, and report deltas."""
    before = score_all(key, response, metrics)
    after = score_all(key, remove_spurious(response, key), metrics)
    return PathologyReport(
        before, after, recall_deltas(before, after), before.counts["response_spurious"]
    )
