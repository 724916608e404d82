"""CoNLL-U reading and writing.

Only the ID / FORM / LEMMA / UPOS / HEAD / DEPREL columns are consumed;
everything else round-trips as ``_``.  Multiword-token ranges (``1-2``) and
empty nodes (``1.1``) are skipped.
"""

from __future__ import annotations

from .graphs import GraphError, SentenceGraph, Token

N_COLUMNS = 10


class ConlluError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_conllu(stream: str) -> list[SentenceGraph]:
    graphs: list[SentenceGraph] = []
    tokens: list[Token] = []
    seen_ids: set[int] = set()
    sent_text = ""
    start_line = 1

    def flush(line_no: int) -> None:
        nonlocal tokens, seen_ids, sent_text
        if not tokens:
            return
        try:
            graph = SentenceGraph(
                tuple(tokens),
                source=sent_text or " ".join(t.text for t in tokens),
                provenance=len(graphs) + 1,
            )
        except GraphError as exc:
            raise ConlluError(f"sentence starting here is not a tree: {exc}",
                              start_line) from exc
        graphs.append(graph)
        tokens = []
        seen_ids = set()
        sent_text = ""

    for line_no, raw in enumerate(stream.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            flush(line_no)
            start_line = line_no + 1
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("text") and "=" in body:
                sent_text = body.split("=", 1)[1].strip()
            continue
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise ConlluError(
                f"expected {N_COLUMNS} tab-separated columns, found {len(cols)}", line_no)
        tid = cols[0]
        if "-" in tid or "." in tid:
            continue  # multiword range / empty node
        try:
            index = int(tid)
        except ValueError:
            raise ConlluError(f"bad token id {tid!r}", line_no) from None
        if index in seen_ids:
            raise ConlluError(f"duplicate token id {index}", line_no)
        seen_ids.add(index)
        try:
            head = int(cols[6])
        except ValueError:
            raise ConlluError(f"bad head {cols[6]!r}", line_no) from None
        try:
            token = Token(index=index, text=cols[1],
                          lemma=cols[2] if cols[2] != "_" else cols[1].lower(),
                          pos=cols[3], head=head, deprel=cols[7])
        except GraphError as exc:
            raise ConlluError(str(exc), line_no) from exc
        tokens.append(token)
    flush(len(stream.splitlines()) + 1)
    return graphs


def serialize_conllu(graphs: list[SentenceGraph]) -> str:
    """Inverse of parse_conllu on the consumed columns."""
    blocks = []
    for graph in graphs:
        lines = [f"# text = {graph.source}"] if graph.source else []
        for t in graph.tokens:
            lines.append("\t".join([
                str(t.index), t.text, t.lemma, t.pos, "_",
                "_", str(t.head), t.deprel, "_", "_",
            ]))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"
