"""CoNLL-2012-style coreference column parsing.

Documents are delimited by ``#begin document <id>`` and ``#end document``
lines; the document id is the raw text after ``#begin document ``
(including any ``; part N`` suffix), so each part is an independent
document.  Token rows are non-blank, non-``#`` lines; blank lines are
sentence separators and do not consume a token index.  Only the final
whitespace-separated column is interpreted:

  ``-``      no coreference at this token
  ``(N``     chain N opens a mention at this token
  ``N)``     chain N closes its most recently opened mention here
  ``(N)``    a one-token mention of chain N
  ``a|b``    several of the above at one token

Closes bind to the most recent open of the same chain (per-chain stack),
which handles nested mentions.  Every open must be closed by the end of
the document.  One span may not belong to two different chains; the same
span repeated inside one chain collapses silently (set semantics).

Parsing is streaming: ``iter_conll`` holds one document at a time.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator

from .errors import DuplicateSpan, ParseError, UnbalancedBracket
from .model import Chain, CorpusSource, Document, Mention, Partition, Role, SourceFormat

_BEGIN = re.compile(r"#begin document (.+)")
_END = "#end document"
_ITEM = re.compile(r"\((\d+)\)|\((\d+)|(\d+)\)")


class _DocBuilder:
    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        self.n_tokens = 0
        self.open_stacks: dict[str, list[int]] = {}
        self.spans: dict[str, set[tuple[int, int]]] = {}
        self.owner: dict[tuple[int, int], str] = {}

    def add_span(self, chain_id: str, start: int, end: int) -> None:
        span = (start, end)
        previous = self.owner.get(span)
        if previous is not None and previous != chain_id:
            raise DuplicateSpan(
                f"span {span} assigned to chains {previous} and {chain_id} "
                f"in document {self.doc_id!r}"
            )
        self.owner[span] = chain_id
        self.spans.setdefault(chain_id, set()).add(span)

    def token(self, coref: str, lineno: int) -> None:
        index = self.n_tokens
        self.n_tokens += 1
        if coref == "-":
            return
        for item in coref.split("|"):
            match = _ITEM.fullmatch(item)
            if match is None:
                raise ParseError(f"bad coreference item {item!r}", line=lineno)
            unit, opened, closed = match.groups()
            if unit is not None:
                self.add_span(unit, index, index)
            elif opened is not None:
                self.open_stacks.setdefault(opened, []).append(index)
            else:
                stack = self.open_stacks.get(closed)
                if not stack:
                    raise UnbalancedBracket(
                        f"close without open for chain {closed}", line=lineno
                    )
                self.add_span(closed, stack.pop(), index)

    def finish(self, lineno: int, role: Role) -> tuple[Document, Partition]:
        unclosed = sorted(cid for cid, stack in self.open_stacks.items() if stack)
        if unclosed:
            raise UnbalancedBracket(
                f"chains never closed in document {self.doc_id!r}: "
                + ", ".join(unclosed),
                line=lineno,
            )
        chains = [
            Chain(cid, (Mention(self.doc_id, s, e) for s, e in spans))
            for cid, spans in self.spans.items()
        ]
        return (
            Document(self.doc_id, self.n_tokens),
            Partition(self.doc_id, chains, role),
        )


def iter_conll(
    lines: Iterable[str], role: Role | str = Role.KEY
) -> Iterator[tuple[Document, Partition]]:
    """Yield one (Document, Partition) per ``#begin``/``#end`` block."""
    role = Role(role)
    builder: _DocBuilder | None = None
    lineno = 0
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if builder is None:
            if not line:
                continue
            begin = _BEGIN.fullmatch(line)
            if begin is None:
                raise ParseError(f"expected #begin document, got {line!r}", line=lineno)
            builder = _DocBuilder(begin.group(1))
            continue
        if line == _END:
            yield builder.finish(lineno, role)
            builder = None
        elif _BEGIN.fullmatch(line):
            raise ParseError(
                f"#begin document inside document {builder.doc_id!r}", line=lineno
            )
        elif not line or line.startswith("#"):
            continue
        else:
            builder.token(line.split()[-1], lineno)
    if builder is not None:
        raise ParseError(
            f"missing #end document for {builder.doc_id!r}", line=lineno
        )


def parse_conll(lines: Iterable[str], role: Role | str = Role.KEY) -> CorpusSource:
    """Parse a whole CoNLL stream into a validated corpus."""
    return CorpusSource(SourceFormat.CONLL, iter_conll(lines, role))
