"""Linguistic-rule extraction of state triples from dependency graphs.

Each rule anchors at the main content verb and walks a declared dependency
pattern; the predicate and complement builders are data (see
data/extraction_rules.json) so new writing styles can extend the catalog.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .config import data_path
from .domain_model import DomainBundle, DomainError, StateKind, StateTriple, slugify
from .ingestion.graphs import SentenceGraph, Token


class MissingSubjectError(DomainError):
    def __init__(self, sentence: str):
        super().__init__(f"no subject found in {sentence!r}")
        self.sentence = sentence


@dataclass(frozen=True)
class RelationRule:
    """One dependency pattern; ``pattern`` names the walk implemented below."""

    name: str
    kind: StateKind
    pattern: str
    absorb_prep: bool = False
    absorb_acomp: bool = False


def load_rules(path: str | None = None) -> list[RelationRule]:
    with open(path or data_path("extraction_rules.json"), encoding="utf-8") as f:
        raw = json.load(f)
    rules = []
    seen = set()
    for entry in raw["rules"]:
        if entry["name"] in seen:
            raise DomainError(f"duplicate extraction rule {entry['name']!r}")
        seen.add(entry["name"])
        rules.append(RelationRule(
            name=entry["name"],
            kind=StateKind(entry["kind"]),
            pattern=entry["pattern"],
            absorb_prep=entry.get("absorb_prep", False),
            absorb_acomp=entry.get("absorb_acomp", False),
        ))
    return rules


DESIRE_VERBS = {"like", "want", "wish", "need", "love", "prefer"}
_NOMINAL = {"NOUN", "PROPN", "NUM"}


def locate_main_verb(graph: SentenceGraph,
                     desire_verbs: set[str] = DESIRE_VERBS) -> Token:
    """Root verb, skipping desire/modal chains ("would like to try" -> try)."""
    verb = graph.root
    while verb.lemma in desire_verbs:
        nxt = graph.child(verb.index, "xcomp")
        if nxt is None or nxt.pos != "VERB":
            break
        verb = nxt
    return verb


def _predicate(graph: SentenceGraph, verb: Token,
               prep: Token | None = None, acomp: Token | None = None) -> str:
    parts = [verb.lemma]
    prt = graph.child(verb.index, "prt")
    if prt is not None:
        parts.append(prt.lemma)
    if acomp is not None:
        parts.append(acomp.lemma)
    if prep is not None:
        parts.append(prep.lemma)
    return slugify(parts)


def _fanout(graph: SentenceGraph, head: Token) -> list[Token]:
    """A complement head plus its conjuncts, in sentence order."""
    out = [head]
    stack = [head.index]
    while stack:
        idx = stack.pop()
        for child in graph.children(idx, "conj"):
            out.append(child)
            stack.append(child.index)
    return sorted(out, key=lambda t: t.index)


def _is_keyword_prep(graph: SentenceGraph, tok: Token,
                     keywords: list[str]) -> bool:
    """Does this prep token realize a fluent keyword ("such as", "including")?"""
    if tok.deprel != "prep":
        return False
    single = {k for k in keywords if " " not in k}
    if tok.text.lower() in single or tok.lemma in single:
        return True
    for phrase in keywords:
        words = phrase.lower().split()
        if len(words) == 2 and (tok.text.lower() == words[1] or tok.lemma == words[1]):
            prev = graph.token(tok.index - 1) if tok.index > 1 else None
            if prev is not None and (prev.text.lower() == words[0] or prev.lemma == words[0]):
                return True
    return False


def _verb_objects(graph: SentenceGraph, verb: Token) -> list[Token]:
    """The verb's object nominals: direct objects plus prep objects."""
    objects = [t for t in graph.children(verb.index, "dobj")]
    for prep in graph.children(verb.index, "prep"):
        objects.extend(graph.children(prep.index, "pobj"))
    return objects


def extract_triples(graph: SentenceGraph, kind: StateKind,
                    rules: list[RelationRule],
                    fluent_keywords: list[str] | None = None) -> list[StateTriple]:
    """Apply every rule of the requested kind at the main verb of the graph."""
    keywords = fluent_keywords if fluent_keywords is not None else \
        ["such as", "including", "consist of", "consists of"]
    main = locate_main_verb(graph)
    subject = graph.child(graph.root.index, "nsubj") or graph.child(main.index, "nsubj")
    if subject is None:
        raise MissingSubjectError(graph.source or graph.render())
    subj = slugify(subject.lemma)

    triples: list[StateTriple] = []

    def add(predicate: str, complement_tokens: list[Token],
            complement_prefix: str = "") -> None:
        for tok in complement_tokens:
            name = slugify([complement_prefix, tok.lemma]) if complement_prefix \
                else slugify(tok.lemma)
            triples.append(StateTriple(subj, predicate, name))

    for rule in rules:
        if rule.kind is not kind:
            continue
        if rule.pattern == "fluent_keyword_pobj":
            for obj in _verb_objects(graph, main):
                for prep in graph.children(obj.index, "prep"):
                    if not _is_keyword_prep(graph, prep, keywords):
                        continue
                    for pobj in graph.children(prep.index, "pobj"):
                        if pobj.pos not in _NOMINAL:
                            continue
                        add(_predicate(graph, main), _fanout(graph, pobj))
        elif rule.pattern == "fluent_keyword_pcomp":
            for obj in _verb_objects(graph, main):
                for prep in graph.children(obj.index, "prep"):
                    if not _is_keyword_prep(graph, prep, keywords):
                        continue
                    pcomp = graph.child(prep.index, "pcomp")
                    if pcomp is None:
                        continue
                    absorbed = None
                    if rule.absorb_prep and obj.deprel == "pobj":
                        hosting = graph.token(obj.head)
                        if hosting.deprel == "prep" and hosting.head == main.index:
                            absorbed = hosting
                    predicate = _predicate(graph, main, prep=absorbed)
                    dobjs = graph.children(pcomp.index, "dobj")
                    if dobjs:
                        for d in dobjs:
                            add(predicate, _fanout(graph, d), complement_prefix=pcomp.lemma)
                    else:
                        add(predicate, [pcomp])
        elif rule.pattern == "fluent_verb_prep":
            for prep in graph.children(main.index, "prep"):
                pair = f"{main.lemma} {prep.lemma}"
                pair_text = f"{main.text.lower()} {prep.text.lower()}"
                if pair not in keywords and pair_text not in keywords:
                    continue
                predicate = _predicate(graph, main,
                                       prep=prep if rule.absorb_prep else None)
                for pobj in graph.children(prep.index, "pobj"):
                    if pobj.pos in _NOMINAL:
                        add(predicate, _fanout(graph, pobj))
        elif rule.pattern == "acomp_prep_pobj":
            for acomp in graph.children(main.index, "acomp"):
                for prep in graph.children(acomp.index, "prep"):
                    predicate = _predicate(
                        graph, main, acomp=acomp if rule.absorb_acomp else None)
                    for pobj in graph.children(prep.index, "pobj"):
                        if pobj.pos in _NOMINAL:
                            add(predicate, _fanout(graph, pobj))
        elif rule.pattern == "verb_prep_pobj":
            for prep in graph.children(main.index, "prep"):
                if _is_keyword_prep(graph, prep, keywords):
                    continue
                predicate = _predicate(graph, main,
                                       prep=prep if rule.absorb_prep else None)
                for pobj in graph.children(prep.index, "pobj"):
                    if pobj.pos in _NOMINAL:
                        add(predicate, _fanout(graph, pobj))
        elif rule.pattern == "verb_dobj":
            for dobj in graph.children(main.index, "dobj"):
                if dobj.pos not in _NOMINAL:
                    continue
                add(_predicate(graph, main), _fanout(graph, dobj))
        elif rule.pattern == "acomp_bare":
            if main.lemma == "be":
                continue
            for acomp in graph.children(main.index, "acomp"):
                if graph.children(acomp.index, "prep"):
                    continue
                add(_predicate(graph, main), [acomp])
        elif rule.pattern == "copula_acomp":
            if main.lemma != "be":
                continue
            for acomp in graph.children(main.index, "acomp"):
                if graph.children(acomp.index, "prep"):
                    continue
                triples.append(StateTriple(
                    subj, _predicate(graph, main, acomp=acomp), ""))
        else:
            raise DomainError(f"rule {rule.name!r} uses unknown pattern {rule.pattern!r}")

    seen: set[StateTriple] = set()
    unique = []
    for t in triples:
        t = t.normalized()
        if t not in seen:
            seen.add(t)
            unique.append(t)
    return unique


def build_state_decls(triples: list[StateTriple], kind: StateKind,
                      bundle: DomainBundle) -> list[str]:
    """Intern extracted triples; fluent triples group on (subject, predicate).

    A lone fluent-classified triple whose group has no other member and no
    existing fluent declaration is stored as a binary fact: a one-value
    fluent carries no more information than the fact itself.
    """
    if kind is StateKind.BINARY:
        return [bundle.intern_state(t, StateKind.BINARY) for t in triples]

    normalized = [t.normalized() for t in triples]
    group_sizes: dict[tuple[str, str], int] = {}
    for t in normalized:
        key = (t.subject, t.predicate)
        group_sizes[key] = group_sizes.get(key, 0) + 1
    ids = []
    for t in normalized:
        key = (t.subject, t.predicate)
        group_is_fluent = group_sizes[key] >= 2 or \
            bundle.fluent_for(t.subject, t.predicate) is not None
        ids.append(bundle.intern_state(
            t, StateKind.FLUENT if group_is_fluent else StateKind.BINARY))
    return ids
