"""Domain model: documents, mentions, chains, partitions, score triples.

Identity rules: ``Mention`` equality and hashing use only the
(doc_id, start, end) span; ``is_named`` and ``surface`` are carried
metadata and never affect identity.  Chains and partitions normalize
their contents into a canonical order on construction, so equal values
compare equal regardless of input order and every downstream iteration
(including float accumulation in the metrics) is deterministic.

All types are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Optional

from .errors import DocMismatch, DuplicateSpan, ModelError, RangeError


class Role(str, Enum):
    """Which side of the evaluation a partition belongs to."""

    KEY = "key"
    RESPONSE = "response"


class SourceFormat(str, Enum):
    """Supported corpus serialization formats."""

    CONLL = "conll"
    JSONL = "jsonl"


@dataclass(frozen=True)
class Document:
    doc_id: str
    num_tokens: int

    def __post_init__(self):
        if self.num_tokens < 0:
            raise ModelError(f"num_tokens must be >= 0, got {self.num_tokens}")


@dataclass(frozen=True)
class Mention:
    """A token span [start, end], inclusive on both ends, 0-based."""

    doc_id: str
    start: int
    end: int
    is_named: bool = field(default=False, compare=False)
    surface: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if not 0 <= self.start <= self.end:
            raise ModelError(f"invalid span ({self.start}, {self.end})")

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass(frozen=True)
class Chain:
    """A non-empty set of mentions referring to one entity.

    Mentions are stored sorted by span, so two chains built from the same
    mention set in any order are equal.  A chain of size 1 is a singleton.
    """

    chain_id: str
    mentions: tuple[Mention, ...]

    def __init__(self, chain_id: str, mentions: Iterable[Mention]):
        ordered = tuple(sorted(mentions, key=lambda m: (m.start, m.end)))
        if not ordered:
            raise ModelError(f"chain {chain_id!r} has no mentions")
        doc_id = ordered[0].doc_id
        for m in ordered:
            if m.doc_id != doc_id:
                raise ModelError(
                    f"chain {chain_id!r} mixes documents {doc_id!r} and {m.doc_id!r}"
                )
        for a, b in zip(ordered, ordered[1:]):
            if a == b:
                raise DuplicateSpan(
                    f"span {a.span} repeated in chain {chain_id!r} of document {doc_id!r}"
                )
        object.__setattr__(self, "chain_id", chain_id)
        object.__setattr__(self, "mentions", ordered)

    def __len__(self) -> int:
        return len(self.mentions)

    def __iter__(self) -> Iterator[Mention]:
        return iter(self.mentions)

    @property
    def doc_id(self) -> str:
        return self.mentions[0].doc_id

    @property
    def is_singleton(self) -> bool:
        return len(self.mentions) == 1

    @cached_property
    def mention_set(self) -> frozenset[Mention]:
        return frozenset(self.mentions)


@dataclass(frozen=True)
class Partition:
    """A division of a document's mentions into disjoint chains.

    Chains are stored sorted by chain_id; every span may appear in at
    most one chain; chain ids are unique within the partition.
    """

    doc_id: str
    chains: tuple[Chain, ...]
    role: Role

    def __init__(self, doc_id: str, chains: Iterable[Chain], role: Role | str):
        ordered = tuple(sorted(chains, key=lambda c: c.chain_id))
        seen_ids: set[str] = set()
        owner: dict[Mention, str] = {}
        for chain in ordered:
            if chain.doc_id != doc_id:
                raise ModelError(
                    f"chain {chain.chain_id!r} belongs to document {chain.doc_id!r}, "
                    f"not {doc_id!r}"
                )
            if chain.chain_id in seen_ids:
                raise ModelError(f"duplicate chain id {chain.chain_id!r} in {doc_id!r}")
            seen_ids.add(chain.chain_id)
            for m in chain.mentions:
                if m in owner:
                    raise DuplicateSpan(
                        f"span {m.span} in chains {owner[m]!r} and {chain.chain_id!r} "
                        f"of document {doc_id!r}"
                    )
                owner[m] = chain.chain_id
        object.__setattr__(self, "doc_id", doc_id)
        object.__setattr__(self, "chains", ordered)
        object.__setattr__(self, "role", Role(role))

    def __len__(self) -> int:
        return len(self.chains)

    @cached_property
    def mention_set(self) -> frozenset[Mention]:
        return frozenset(m for c in self.chains for m in c.mentions)

    @cached_property
    def chain_by_mention(self) -> dict[Mention, Chain]:
        return {m: c for c in self.chains for m in c.mentions}

    @cached_property
    def singleton_mentions(self) -> frozenset[Mention]:
        """Mentions that form size-1 chains."""
        return frozenset(c.mentions[0] for c in self.chains if c.is_singleton)


def mentions_of(partition: Partition) -> frozenset[Mention]:
    """All mentions of a partition; cardinality equals the sum of chain sizes."""
    return partition.mention_set


def chain_of(partition: Partition, mention: Mention) -> Optional[Chain]:
    """The unique chain containing ``mention`` by span identity, or None."""
    return partition.chain_by_mention.get(mention)


def check_same_doc(key: Partition, response: Partition) -> None:
    if key.doc_id != response.doc_id:
        raise DocMismatch(
            f"key document {key.doc_id!r} does not match response document "
            f"{response.doc_id!r}",
            doc_id=key.doc_id,
        )


def f1_of(recall: float, precision: float) -> float:
    """Harmonic mean with the 0/0 -> 0 convention."""
    if recall + precision == 0:
        return 0.0
    return 2.0 * recall * precision / (recall + precision)


@dataclass(frozen=True)
class ScoreTriple:
    """Recall, precision, F1, each in [0, 1].

    The f1-is-harmonic-mean relation is not enforced here: BLANC's overall
    triple averages two category F1s and macro-averaged triples average
    per-document F1s, both of which break the relation by definition.
    Use ``from_rp`` when the harmonic relation should hold.
    """

    recall: float
    precision: float
    f1: float

    def __post_init__(self):
        for name in ("recall", "precision", "f1"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ModelError(f"{name} out of range: {v}")

    @classmethod
    def from_rp(cls, recall: float, precision: float) -> "ScoreTriple":
        return cls(recall, precision, f1_of(recall, precision))


ZERO_TRIPLE = ScoreTriple(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class CorpusSource:
    """A parsed corpus: one (Document, Partition) per document, ids unique."""

    format: SourceFormat
    documents: tuple[tuple[Document, Partition], ...]

    def __init__(
        self,
        format: SourceFormat | str,
        documents: Iterable[tuple[Document, Partition]],
    ):
        docs = tuple((doc, part) for doc, part in documents)
        seen: set[str] = set()
        for doc, part in docs:
            if part.doc_id != doc.doc_id:
                raise ModelError(
                    f"partition for {part.doc_id!r} attached to document {doc.doc_id!r}"
                )
            if doc.doc_id in seen:
                raise ModelError(f"duplicate document id {doc.doc_id!r}")
            seen.add(doc.doc_id)
            for chain in part.chains:
                for m in chain.mentions:
                    if m.end >= doc.num_tokens:
                        raise RangeError(
                            f"mention ({m.start}, {m.end}) outside document "
                            f"{doc.doc_id!r} with {doc.num_tokens} tokens"
                        )
        object.__setattr__(self, "format", SourceFormat(format))
        object.__setattr__(self, "documents", docs)

    def __len__(self) -> int:
        return len(self.documents)
