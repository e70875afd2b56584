"""Shared test utilities: label-based instance builders and format writers.

Metric tests describe instances as plain dicts mapping chain id to a set
of hashable mention labels; these helpers turn label dicts into model
partitions (each distinct label becomes one single-token mention, with a
label-to-token mapping shared by both sides of a pair).
"""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping, Optional

from hypothesis import strategies as st

from corefeval import Chain, Document, Mention, Partition, Role


def label_mapping(*chain_dicts: Mapping[str, frozenset]) -> dict:
    labels = sorted(
        {m for chains in chain_dicts for ms in chains.values() for m in ms},
        key=str,
    )
    return {label: index for index, label in enumerate(labels)}


def build_partition(
    chains: Mapping[str, Iterable],
    role: Role | str,
    doc: str = "d",
    mapping: Optional[dict] = None,
    named: frozenset = frozenset(),
) -> Partition:
    if mapping is None:
        mapping = label_mapping(chains)
    built = [
        Chain(
            cid,
            [Mention(doc, mapping[m], mapping[m], is_named=m in named) for m in ms],
        )
        for cid, ms in chains.items()
    ]
    return Partition(doc, built, role)


def build_pair(
    key_chains: Mapping[str, frozenset],
    resp_chains: Mapping[str, frozenset],
    doc: str = "d",
    named: frozenset = frozenset(),
) -> tuple[Partition, Partition]:
    """Key and response partitions over one shared label-to-token mapping."""
    mapping = label_mapping(key_chains, resp_chains)
    return (
        build_partition(key_chains, Role.KEY, doc, mapping, named),
        build_partition(resp_chains, Role.RESPONSE, doc, mapping, named),
    )


def doc_for(partition: Partition, extra_tokens: int = 0) -> Document:
    last = max((m.end for m in partition.mention_set), default=-1)
    return Document(partition.doc_id, last + 1 + extra_tokens)


def sized_corpus(doc_specs: Mapping[str, Iterable[int]]):
    """Documents holding single-token mention chains of the given sizes."""
    docs = []
    for doc_id, sizes in doc_specs.items():
        chains = []
        token = 0
        for i, size in enumerate(sizes):
            chains.append(
                Chain(
                    f"c{i}",
                    [Mention(doc_id, token + j, token + j) for j in range(size)],
                )
            )
            token += size
        docs.append((Document(doc_id, token), Partition(doc_id, chains, Role.KEY)))
    return docs


def conll_text(docs: Iterable[tuple[Document, Partition]]) -> str:
    """Serialize documents in the bracket column format.

    Per token, closes are written before unit mentions and opens, so a
    mention ending where a same-chain mention begins closes first.
    """
    lines = []
    for doc, part in docs:
        lines.append(f"#begin document {doc.doc_id}")
        opens = defaultdict(list)
        closes = defaultdict(list)
        units = defaultdict(list)
        for chain in part.chains:
            for m in chain.mentions:
                if m.start == m.end:
                    units[m.start].append(chain.chain_id)
                else:
                    opens[m.start].append(chain.chain_id)
                    closes[m.end].append(chain.chain_id)
        for i in range(doc.num_tokens):
            items = (
                [f"{cid})" for cid in closes.get(i, [])]
                + [f"({cid})" for cid in units.get(i, [])]
                + [f"({cid}" for cid in opens.get(i, [])]
            )
            coref = "|".join(items) if items else "-"
            lines.append(f"tok{i}\t{coref}")
        lines.append("#end document")
    return "\n".join(lines) + "\n"


def random_labels(
    rng,
    max_mentions: int = 12,
    max_chains: int = 5,
    max_spurious: int = 4,
) -> tuple[dict[str, frozenset], dict[str, frozenset]]:
    """A random (key, response) pair of label dicts over a shared universe.

    Key and response each cover a random subset of the mention universe;
    response-only labels (spurious) are drawn from a disjoint range.
    """
    n = rng.randrange(0, max_mentions + 1)
    key: dict[str, set] = {}
    resp: dict[str, set] = {}
    for label in range(n):
        k = rng.randrange(-1, max_chains)
        r = rng.randrange(-1, max_chains)
        if k >= 0:
            key.setdefault(f"k{k}", set()).add(label)
        if r >= 0:
            resp.setdefault(f"r{r}", set()).add(label)
    for extra in range(rng.randrange(0, max_spurious + 1)):
        r = rng.randrange(0, max_chains)
        resp.setdefault(f"r{r}", set()).add(1000 + extra)
    return (
        {cid: frozenset(ms) for cid, ms in key.items()},
        {cid: frozenset(ms) for cid, ms in resp.items()},
    )


def _group(assignment: list[int], prefix: str) -> dict[str, frozenset]:
    groups: dict[str, set] = {}
    for label, target in enumerate(assignment):
        if target >= 0:
            groups.setdefault(f"{prefix}{target}", set()).add(label)
    return {cid: frozenset(ms) for cid, ms in groups.items()}


@st.composite
def label_instances(draw, max_mentions: int = 10, max_chains: int = 5):
    """Hypothesis strategy for (key, response) label dict pairs."""
    n = draw(st.integers(0, max_mentions))
    key_assign = draw(st.lists(st.integers(-1, max_chains - 1), min_size=n, max_size=n))
    resp_assign = draw(st.lists(st.integers(-1, max_chains - 1), min_size=n, max_size=n))
    key = _group(key_assign, "k")
    resp = _group(resp_assign, "r")
    spurious = draw(st.lists(st.integers(0, max_chains - 1), max_size=3))
    for extra, target in enumerate(spurious):
        cid = f"r{target}"
        resp[cid] = resp.get(cid, frozenset()) | {1000 + extra}
    return key, resp


@st.composite
def label_partitions(draw, max_mentions: int = 10, max_chains: int = 5):
    """Hypothesis strategy for a single partition as a label dict."""
    n = draw(st.integers(0, max_mentions))
    assign = draw(st.lists(st.integers(-1, max_chains - 1), min_size=n, max_size=n))
    return _group(assign, "c")


def _crosses(a: tuple[int, int], b: tuple[int, int]) -> bool:
    (s1, e1), (s2, e2) = sorted((a, b))
    return s1 < s2 <= e1 < e2


@st.composite
def span_documents(draw, num_tokens: int = 10, max_chains: int = 4):
    """Hypothesis strategy for (Document, Partition) with multi-token,
    possibly nested mentions and digit chain ids.

    Two crossing spans never share a chain: the bracket column format
    binds closes to the most recent same-chain open, so a same-chain
    crossing pair is unrepresentable (it reads back as a nesting).
    Crossing spans in different chains are kept.
    """
    spans = draw(
        st.sets(
            st.tuples(
                st.integers(0, num_tokens - 1), st.integers(0, num_tokens - 1)
            ).map(lambda t: (min(t), max(t))),
            max_size=8,
        )
    )
    spans = sorted(spans)
    assign = draw(
        st.lists(
            st.integers(0, max_chains - 1),
            min_size=len(spans),
            max_size=len(spans),
        )
    )
    named_flags = draw(
        st.lists(st.booleans(), min_size=len(spans), max_size=len(spans))
    )
    doc_id = "doc"
    by_chain: dict[str, list[tuple[int, int]]] = {}
    chains: dict[str, list[Mention]] = {}
    overflow = 0
    for span, target, named in zip(spans, assign, named_flags):
        cid = str(target)
        if any(_crosses(span, other) for other in by_chain.get(cid, [])):
            cid = str(max_chains + overflow)
            overflow += 1
        by_chain.setdefault(cid, []).append(span)
        chains.setdefault(cid, []).append(
            Mention(doc_id, span[0], span[1], is_named=named)
        )
    part = Partition(
        doc_id, [Chain(cid, ms) for cid, ms in chains.items()], Role.KEY
    )
    return Document(doc_id, num_tokens), part
