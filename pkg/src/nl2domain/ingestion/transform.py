"""Sentence-level normalization: co-reference, simplification, classification."""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from ..domain_model import StateKind, slugify
from .graphs import SentenceGraph, Token, renumber

_AGENT_PRONOUNS = {"he", "she", "they"}
_AGENT_POSSESSIVES = {"his", "her", "their"}
_OBJECT_PRONOUNS = {"it"}
_OBJECT_POSSESSIVES = {"its"}

_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")


def split_text(text: str) -> list[str]:
    """Raw author text -> sentences (line-based, then ./?/! within lines)."""
    sentences: list[str] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        for part in _SENTENCE_SPLIT_RE.split(line):
            part = part.strip()
            if part:
                sentences.append(part)
    return sentences


@dataclass(frozen=True)
class CorefIssue:
    provenance: int
    token_index: int
    pronoun: str
    message: str


def resolve_coreferences(
    sentences: Sequence[SentenceGraph],
    entities: Iterable[str],
    agents: Iterable[str] | None = None,
    context_mentions: Sequence[str] = (),
) -> tuple[list[SentenceGraph], list[CorefIssue]]:
    """Replace personal and possessive pronouns by their nearest antecedent.

    ``entities`` are the known smart-object names; ``agents`` the subset that
    he/she/they may refer to (defaults to all entities).  "it"/"its" only
    resolve to non-agent entities, so a lone character never captures them.
    ``context_mentions`` seed the antecedent list (oldest first) with entity
    mentions seen before this window.  Substitution is in place: token count
    and dependency slots are preserved.
    """
    entity_set = {slugify(e) for e in entities}
    if not entity_set:
        raise ValueError("resolve_coreferences requires at least one known entity")
    agent_set = {slugify(a) for a in agents} if agents is not None else set(entity_set)
    object_set = entity_set - agent_set

    # antecedents in mention order across the window, seeded with context
    mentions: list[str] = [slugify(m) for m in context_mentions
                           if slugify(m) in entity_set]
    issues: list[CorefIssue] = []
    resolved: list[SentenceGraph] = []

    def nearest(candidates: set[str]) -> str | None:
        for name in reversed(mentions):
            if name in candidates:
                return name
        return None

    for graph in sentences:
        new_tokens: list[Token] = []
        changed = False
        for tok in graph.tokens:
            low = tok.text.lower()
            referent: str | None = None
            missing_pool = False
            if tok.pos == "PRON":
                if low in _AGENT_PRONOUNS or low in _AGENT_POSSESSIVES:
                    referent = nearest(agent_set)
                    missing_pool = referent is None
                elif low in _OBJECT_PRONOUNS or low in _OBJECT_POSSESSIVES:
                    referent = nearest(object_set)
                    missing_pool = referent is None
            if referent is not None:
                possessive = low in _AGENT_POSSESSIVES or low in _OBJECT_POSSESSIVES
                text = referent.capitalize() + ("'s" if possessive else "")
                tok = replace(tok, text=text, lemma=referent, pos="PROPN")
                changed = True
            elif missing_pool:
                issues.append(CorefIssue(
                    provenance=graph.provenance, token_index=tok.index, pronoun=tok.text,
                    message=f"pronoun {tok.text!r} has no preceding entity to resolve to"))
            if tok.pos in {"PROPN", "NOUN"} and tok.lemma in entity_set:
                mentions.append(tok.lemma)
            new_tokens.append(tok)
        resolved.append(replace(graph, tokens=tuple(new_tokens)) if changed else graph)
    return resolved, issues


_CLAUSE_DEPRELS = {"conj", "advcl"}
_VERBAL_POS = {"VERB", "AUX"}


def simplify(graph: SentenceGraph) -> list[SentenceGraph]:
    """Split conjoined/adverbial clauses into single-main-verb graphs.

    Shared subjects are copied into clauses that lack one; token order inside
    each clause follows the original sentence.  Unsplittable graphs return as
    a singleton list.
    """
    root = graph.root
    clause_heads = [root]
    frontier = [root]
    while frontier:
        head = frontier.pop()
        for child in graph.children(head.index):
            if child.deprel in _CLAUSE_DEPRELS and child.pos in _VERBAL_POS:
                clause_heads.append(child)
                frontier.append(child)
    if len(clause_heads) == 1:
        return [graph]

    head_indices = {t.index for t in clause_heads}
    subject = graph.child(root.index, "nsubj")
    subject_block: list[Token] = graph.subtree(subject.index) if subject else []

    out: list[SentenceGraph] = []
    for head in clause_heads:
        kept: list[Token] = []
        stack = [head.index]
        while stack:
            idx = stack.pop()
            kept.append(graph.token(idx))
            for child in graph.children(idx):
                if child.index in head_indices:
                    continue
                if child.deprel == "cc" and idx in head_indices:
                    continue
                stack.append(child.index)
        has_subject = any(t.deprel == "nsubj" and t.head == head.index for t in kept)
        if not has_subject and subject_block and head is not root:
            for t in subject_block:
                if t.index == subject.index:
                    kept.append(replace(t, head=head.index, deprel="nsubj"))
                else:
                    kept.append(t)
        out.append(renumber(kept, head.index, source=graph.source,
                            provenance=graph.provenance))
    return out


def classify_state_kind(graph: SentenceGraph,
                        fluent_keywords: Sequence[str]) -> StateKind:
    """Fluent iff any configured keyword phrase occurs in the sentence."""
    texts = [t.text.lower() for t in graph.tokens]
    lemmas = [t.lemma.lower() for t in graph.tokens]
    for phrase in fluent_keywords:
        words = phrase.lower().split()
        for start in range(len(texts) - len(words) + 1):
            if all(texts[start + k] == words[k] or lemmas[start + k] == words[k]
                   for k in range(len(words))):
                return StateKind.FLUENT
    return StateKind.BINARY
