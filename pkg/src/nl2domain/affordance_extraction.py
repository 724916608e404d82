"""Affordance extraction: marker splitting, naming, condition unification.

An affordance sentence has the shape
``<action> <pre-marker> <preconditions> <post-marker> <postconditions>``;
the marker catalogs live in data/markers.json and match longest-first on
word boundaries.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .config import data_path, load_json_data
from .domain_model import (
    Affordance,
    Cnf,
    DomainBundle,
    DomainError,
    Literal,
    PostCondition,
    StateKind,
    StateTriple,
    slugify,
)
from .ingestion.graphs import SentenceGraph
from .semantics import EmbeddingTable, PhraseFilters, match_state
from .state_extraction import RelationRule, extract_triples, locate_main_verb


@dataclass(frozen=True)
class MarkerCatalog:
    """Affordance pre/post markers plus affect markers, all mutually distinct."""

    affordance_pre: tuple[str, ...]
    affordance_post: tuple[str, ...]
    affect: tuple[str, ...]
    fluent_keywords: tuple[str, ...]

    def __post_init__(self) -> None:
        for group in (self.affordance_pre, self.affordance_post, self.affect):
            if not group or any(not m.strip() for m in group):
                raise DomainError("marker catalogs must be non-empty phrases")
        if set(self.affordance_pre) & set(self.affordance_post):
            raise DomainError("a marker cannot be both a pre and a post marker")

    @staticmethod
    def load(path: str | None = None) -> "MarkerCatalog":
        if path is None:
            raw = load_json_data("markers.json")
        else:
            with open(path, encoding="utf-8") as f:
                raw = json.load(f)
        return MarkerCatalog(
            affordance_pre=tuple(raw["affordance_pre_markers"]),
            affordance_post=tuple(raw["affordance_post_markers"]),
            affect=tuple(raw["affect_markers"]),
            fluent_keywords=tuple(raw["fluent_keywords"]),
        )


@dataclass(frozen=True)
class AffordanceDraft:
    """Marker-split affordance sentence, before state unification."""

    head_text: str
    pre_text: str | None = None
    post_text: str | None = None
    pre_marker: str | None = None
    post_marker: str | None = None
    source: str = ""
    provenance: int = 0

    def __post_init__(self) -> None:
        if not self.head_text.strip():
            raise DomainError("affordance draft requires a non-empty head")


def find_marker(text: str, markers: tuple[str, ...]) -> tuple[int, int, str] | None:
    """Earliest, longest marker occurrence as (start, end, matched_text)."""
    best: tuple[int, int, str] | None = None
    for marker in markers:
        pattern = re.compile(r"(?<![\w])" + re.escape(marker) + r"(?![\w])",
                             re.IGNORECASE)
        m = pattern.search(text)
        if m is None:
            continue
        if best is None or (m.start(), -len(m.group(0))) < (best[0], -len(best[2])):
            best = (m.start(), m.end(), m.group(0))
    return best


def split_affordance(sentence: str, markers: MarkerCatalog,
                     provenance: int = 0) -> AffordanceDraft | None:
    """Split on pre/post markers; None when the sentence is not an affordance.

    Segments keep their punctuation so head + markers + segments reassemble
    into the original sentence modulo whitespace.
    """
    pre_hit = find_marker(sentence, markers.affordance_pre)
    post_hit = find_marker(sentence, markers.affordance_post)
    if pre_hit is None and post_hit is None:
        return None
    if pre_hit and post_hit and pre_hit[0] == post_hit[0]:
        post_hit = None

    cut = min(h[0] for h in (pre_hit, post_hit) if h is not None)
    head = sentence[:cut].strip()
    pre_text = post_text = None
    pre_marker = post_marker = None
    if pre_hit is not None:
        end = post_hit[0] if post_hit is not None and post_hit[0] > pre_hit[0] \
            else len(sentence)
        pre_text = sentence[pre_hit[1]:end].strip()
        pre_marker = pre_hit[2]
    if post_hit is not None:
        end = pre_hit[0] if pre_hit is not None and pre_hit[0] > post_hit[0] \
            else len(sentence)
        post_text = sentence[post_hit[1]:end].strip()
        post_marker = post_hit[2]
    if not head:
        return None
    return AffordanceDraft(head_text=head, pre_text=pre_text or None,
                           post_text=post_text or None,
                           pre_marker=pre_marker, post_marker=post_marker,
                           source=sentence, provenance=provenance)


def derive_affordance_name(head_text: str, graph: SentenceGraph) -> str:
    """Verb lemma plus its object/preposition chain: "goes to the library"
    -> go_to_library."""
    verb = locate_main_verb(graph)
    if verb.pos != "VERB":
        raise DomainError(f"no verb found in affordance head {head_text!r}")
    parts: list[str] = [verb.lemma]
    prt = graph.child(verb.index, "prt")
    if prt is not None:
        parts.append(prt.lemma)
    acomp = graph.child(verb.index, "acomp")
    if acomp is not None:
        parts.append(acomp.lemma)
        anchor = acomp
    else:
        anchor = verb
    dobj = graph.child(verb.index, "dobj")
    if dobj is not None:
        parts.append(dobj.lemma)
        anchor = dobj
    prep = graph.child(anchor.index, "prep") or graph.child(verb.index, "prep")
    if prep is not None:
        pobj = graph.child(prep.index, "pobj")
        if pobj is not None:
            parts.append(prep.lemma)
            parts.append(pobj.lemma)
    return slugify(parts)


def extract_conditions(segment_text: str,
                       rules: list[RelationRule] | None = None,
                       context: list[str] | None = None,
                       fluent_keywords: list[str] | None = None) -> list[StateTriple]:
    """Condition triples of a pre/post segment (parsed, resolved, simplified).

    ``context`` supplies co-reference antecedents, e.g. the affordance head's
    subject, so "he has an exam" resolves against the owning character.
    """
    from .ingestion import builtin_parse, resolve_coreferences, simplify
    from .state_extraction import extract_triples, load_rules

    if not segment_text.strip():
        return []
    rules = rules if rules is not None else load_rules()
    graph = builtin_parse(segment_text)
    graphs = [graph]
    if context:
        graphs, _issues = resolve_coreferences(graphs, context,
                                               context_mentions=context)
    triples: list[StateTriple] = []
    for g in graphs:
        for clause in simplify(g):
            triples.extend(extract_triples(clause, StateKind.BINARY, rules,
                                           fluent_keywords))
    return triples


@dataclass(frozen=True)
class UnifyOutcome:
    """Result of mapping one condition triple onto the bundle's states."""

    literal: Literal | None
    similarity: float
    matched: str | None = None       # existing state id the triple mapped to
    created: str | None = None       # state id interned for the triple
    proposal: StateTriple | None = None  # unresolved in strict mode


def unify_condition(triple: StateTriple, bundle: DomainBundle,
                    table: EmbeddingTable, threshold: float,
                    filters: PhraseFilters, strict: bool = False) -> UnifyOutcome:
    """Map a triple to an existing state by identity or embedding similarity.

    Unmatched triples intern a new binary state in permissive mode and come
    back as proposals in strict mode.
    """
    triple = triple.normalized()
    exact = bundle.binary_for(triple)
    if exact is not None:
        return UnifyOutcome(Literal(exact.id), 1.0, matched=exact.id)
    fluent = bundle.fluent_for(triple.subject, triple.predicate)
    if fluent is not None and triple.complement:
        if triple.complement in fluent.values or not strict:
            sid = bundle.intern_state(triple, StateKind.FLUENT)
            return UnifyOutcome(Literal(sid, value=triple.complement), 1.0,
                                matched=sid)
        return UnifyOutcome(None, 0.0, proposal=triple)

    candidates = [d for d in bundle.states.values() if d.owner == triple.subject]
    hit = match_state(triple, candidates, table, threshold, filters)
    if hit is not None:
        decl, score = hit
        if decl.kind is StateKind.BINARY:
            return UnifyOutcome(Literal(decl.id), score, matched=decl.id)
        if triple.complement:
            if triple.complement not in decl.values and strict:
                return UnifyOutcome(None, score, proposal=triple)
            sid = bundle.intern_state(
                StateTriple(decl.owner, "_".join(decl.name_words()),
                            triple.complement), StateKind.FLUENT)
            return UnifyOutcome(Literal(sid, value=triple.complement), score,
                                matched=sid)
    if strict:
        return UnifyOutcome(None, 0.0, proposal=triple)
    sid = bundle.intern_state(triple, StateKind.BINARY)
    return UnifyOutcome(Literal(sid), 0.0, created=sid)


def detect_probability(segment_text: str, keyword_map: dict[str, float]) -> float:
    """Probability of the earliest uncertainty keyword; 1.0 without one."""
    best_pos: int | None = None
    best_value = 1.0
    for keyword, value in keyword_map.items():
        m = re.search(r"(?<![\w])" + re.escape(keyword) + r"(?![\w])",
                      segment_text, re.IGNORECASE)
        if m and (best_pos is None or m.start() < best_pos):
            best_pos = m.start()
            best_value = float(value)
    return best_value


def load_probability_keywords(path: str | None = None) -> dict[str, float]:
    if path is None:
        raw = load_json_data("probability_keywords.json")
    else:
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
    keywords = {k: float(v) for k, v in raw["keywords"].items()}
    for k, v in keywords.items():
        if not 0.0 < v <= 1.0:
            raise DomainError(f"probability for keyword {k!r} outside (0, 1]: {v}")
    return keywords
