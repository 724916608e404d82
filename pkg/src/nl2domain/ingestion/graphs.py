"""Dependency-graph types shared by the CoNLL-U reader and the built-in parser."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence


class GraphError(ValueError):
    """A token table does not form a valid single-root dependency tree."""


@dataclass(frozen=True)
class Token:
    """One token of a parsed sentence; ``head`` 0 marks the root."""

    index: int
    text: str
    lemma: str
    pos: str
    head: int
    deprel: str

    def __post_init__(self) -> None:
        if self.index < 1:
            raise GraphError(f"token index must be 1-based, got {self.index}")
        if self.head == self.index:
            raise GraphError(f"token {self.index} ({self.text!r}) heads itself")
        if not self.deprel:
            raise GraphError(f"token {self.index} ({self.text!r}) has an empty deprel")


@dataclass(frozen=True)
class SentenceGraph:
    tokens: tuple[Token, ...]
    source: str = ""
    provenance: int = 0

    def __post_init__(self) -> None:
        validate_tree(self.tokens)

    @property
    def root(self) -> Token:
        return next(t for t in self.tokens if t.head == 0)

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    def children(self, index: int, deprel: str | None = None) -> list[Token]:
        kids = [t for t in self.tokens if t.head == index]
        if deprel is not None:
            kids = [t for t in kids if t.deprel == deprel]
        return kids

    def child(self, index: int, deprel: str) -> Token | None:
        kids = self.children(index, deprel)
        return kids[0] if kids else None

    def subtree(self, index: int) -> list[Token]:
        """The token and all its descendants, in sentence order."""
        keep = {index}
        changed = True
        while changed:
            changed = False
            for t in self.tokens:
                if t.head in keep and t.index not in keep:
                    keep.add(t.index)
                    changed = True
        return [t for t in self.tokens if t.index in keep]

    def text_of(self, tokens: Iterable[Token]) -> str:
        return " ".join(t.text for t in tokens)

    def render(self) -> str:
        """The sentence as plain text (space-joined, punctuation attached)."""
        out: list[str] = []
        for t in self.tokens:
            if t.pos == "PUNCT" and out:
                out[-1] += t.text
            else:
                out.append(t.text)
        return " ".join(out)


def validate_tree(tokens: Sequence[Token]) -> None:
    """Raise GraphError unless the head links form a single-root tree."""
    if not tokens:
        raise GraphError("sentence has no tokens")
    indices = [t.index for t in tokens]
    if indices != list(range(1, len(tokens) + 1)):
        dupes = {i for i in indices if indices.count(i) > 1}
        if dupes:
            raise GraphError(f"duplicate token indices: {sorted(dupes)}")
        raise GraphError(f"token indices are not contiguous 1..{len(tokens)}")
    roots = [t for t in tokens if t.head == 0]
    if len(roots) != 1:
        raise GraphError(f"expected exactly one root, found {len(roots)}")
    valid = set(indices) | {0}
    for t in tokens:
        if t.head not in valid:
            raise GraphError(f"token {t.index} ({t.text!r}) heads missing index {t.head}")
    # walk up from every token; a cycle never reaches the root
    for t in tokens:
        seen = set()
        cur = t
        while cur.head != 0:
            if cur.index in seen:
                raise GraphError(f"cycle through token {t.index} ({t.text!r})")
            seen.add(cur.index)
            cur = tokens[cur.head - 1]


def renumber(tokens: Sequence[Token], root_index: int,
             source: str = "", provenance: int = 0) -> SentenceGraph:
    """Rebuild a graph from a token subset, remapping indices and heads.

    ``root_index`` names the (old) index that becomes the new root; heads
    that point outside the subset are only legal for that token.
    """
    ordered = sorted(tokens, key=lambda t: t.index)
    mapping = {t.index: i + 1 for i, t in enumerate(ordered)}
    rebuilt = []
    for t in ordered:
        if t.index == root_index:
            rebuilt.append(replace(t, index=mapping[t.index], head=0, deprel="root"))
        else:
            if t.head not in mapping:
                raise GraphError(
                    f"token {t.index} ({t.text!r}) heads {t.head}, outside the clause")
            rebuilt.append(replace(t, index=mapping[t.index], head=mapping[t.head]))
    return SentenceGraph(tuple(rebuilt), source=source, provenance=provenance)
