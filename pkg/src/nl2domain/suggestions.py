"""Suggestion engines: author feedback and common-sense knowledge.

Both emit :class:`Suggestion` records with deterministic ids so the session
layer can persist accept/reject decisions and replay them.  ConceptNet access
goes through a client interface with an offline fixture store (default) and a
live HTTP backend.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Protocol

import httpx

from .config import data_path
from .domain_model import (
    AffectChange,
    AffectKind,
    AffectRule,
    AffectTarget,
    ChangeMode,
    Cnf,
    DomainBundle,
    DomainError,
    Literal,
    StateDecl,
    StateKind,
    slugify,
)
from .semantics import EmbeddingTable, PhraseFilters, phrase_vector, similarity

SUGGESTION_KINDS = {
    "missing-affect-rule",
    "incomplete-affordance",
    "capability",
    "affordance-condition",
    "affect-trigger",
}

# relations suggesting affordance post-conditions vs causes/pre-conditions
POST_RELATIONS = ("Causes", "Entails", "HasLastSubevent")
PRE_RELATIONS = ("HasPrerequisite", "HasFirstSubevent", "CreatedBy")
AFFECT_RELATIONS = ("CausesDesire", "MotivatedByGoal")

CAPABILITY_PROMPT = "Since '{name}' is a type of '{type}', does it '{capability}'?"
POST_PROMPT = "Is '{end}', a post-condition of '{affordance}'?"
PRE_PROMPT = "Is '{end}', a cause of '{affordance}'?"
AFFECT_PROMPT = "Should the state '{state}' affect the {kind} '{target}'?"
MISSING_RULE_PROMPT = ("The state '{state}' seems related to the {kind} "
                      "'{target}'. Add a rule connecting them?")
INCOMPLETE_PROMPT = ("Affordance '{affordance}' has {count} {what}. "
                     "Can you describe more?")


@dataclass(frozen=True)
class Suggestion:
    id: str
    kind: str
    prompt: str
    payload: dict
    score: float
    status: str = "pending"

    def __post_init__(self) -> None:
        if self.kind not in SUGGESTION_KINDS:
            raise DomainError(f"unknown suggestion kind {self.kind!r}")
        if self.status not in {"pending", "accepted", "rejected"}:
            raise DomainError(f"unknown suggestion status {self.status!r}")

    def decided(self, accept: bool) -> "Suggestion":
        if self.status != "pending":
            raise DomainError(f"suggestion {self.id} already {self.status}")
        return replace(self, status="accepted" if accept else "rejected")


def _suggestion_id(kind: str, prompt: str) -> str:
    digest = hashlib.sha1(f"{kind}|{prompt}".encode("utf-8")).hexdigest()
    return f"s-{digest[:10]}"


def make_suggestion(kind: str, prompt: str, payload: dict, score: float) -> Suggestion:
    return Suggestion(id=_suggestion_id(kind, prompt), kind=kind, prompt=prompt,
                      payload=payload, score=score)


def sort_suggestions(items: Iterable[Suggestion]) -> list[Suggestion]:
    return sorted(items, key=lambda s: (-s.score, s.id))


# ---------------------------------------------------------------------------
# Author feedback (missing rules, incomplete affordances)
# ---------------------------------------------------------------------------

def _rule_covers(rule: AffectRule, state_id: str, kind: AffectKind,
                 name: str | None) -> bool:
    if rule.target.kind is not kind or rule.target.name != name:
        return False
    return any(lit.state == state_id for lit in rule.condition.literals())


def propose_missing_rules(bundle: DomainBundle, table: EmbeddingTable,
                          filters: PhraseFilters,
                          threshold: float) -> list[Suggestion]:
    """Suggest state/affect pairs whose names are semantically close.

    Pairs already covered by a rule are never suggested.
    """
    targets = [(AffectKind.EMOTION, e.name) for e in bundle.emotion_catalog]
    targets += [(AffectKind.MOTIVATION, f) for f in bundle.motivation_catalog.factors]
    out: list[Suggestion] = []
    for decl in bundle.states.values():
        svec = phrase_vector(decl.name_words(), table, filters)
        if svec is None:
            continue
        for kind, name in targets:
            if any(_rule_covers(r, decl.id, kind, name) for r in bundle.affect_rules):
                continue
            tvec = phrase_vector([name], table, filters)
            if tvec is None:
                continue
            score = similarity(svec, tvec)
            if score < threshold:
                continue
            state_phrase = " ".join(decl.name_words())
            prompt = MISSING_RULE_PROMPT.format(state=state_phrase,
                                                kind=kind.value, target=name)
            payload = {
                "edit": "add-affect-rule",
                "state": decl.id,
                "value": decl.values[0] if decl.kind is StateKind.FLUENT else None,
                "target_kind": kind.value,
                "target_name": name,
            }
            out.append(make_suggestion("missing-affect-rule", prompt, payload, score))
    return sort_suggestions(out)


def flag_incomplete_affordances(bundle: DomainBundle, min_pre: int = 1,
                                min_post: int = 1) -> list[Suggestion]:
    if min_pre < 0 or min_post < 0:
        raise DomainError("thresholds must be non-negative")
    out = []
    for aff in bundle.affordances:
        n_pre = len(aff.preconditions.literals())
        n_post = len(aff.postconditions)
        asks = []
        if n_pre < min_pre:
            asks.append(("preconditions", n_pre))
        if n_post < min_post:
            asks.append(("postconditions", n_post))
        for what, count in asks:
            prompt = INCOMPLETE_PROMPT.format(
                affordance=" ".join(aff.name.split("_")),
                count=count if count else "no", what=what)
            payload = {"edit": "clarify-affordance", "affordance": aff.name,
                       "owner": aff.owner, "missing": what}
            out.append(make_suggestion("incomplete-affordance", prompt, payload, 0.0))
    return sort_suggestions(out)


# ---------------------------------------------------------------------------
# ConceptNet client
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConceptNetEdge:
    start: str
    relation: str
    end: str
    weight: float


class ConceptNetError(RuntimeError):
    pass


class ConceptNetClient(Protocol):
    def edges(self, concept: str, relation: str) -> list[ConceptNetEdge]: ...


class FixtureConceptNet:
    """Offline edge store: one tab-separated edge per line."""

    def __init__(self, path: str | None = None):
        self.path = path or str(data_path("conceptnet_fixtures.tsv"))
        self._edges: list[ConceptNetEdge] = []
        with open(self.path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 4:
                    raise ConceptNetError(
                        f"{self.path}:{line_no}: expected 4 tab-separated fields")
                self._edges.append(ConceptNetEdge(
                    start=parts[0], relation=parts[1], end=parts[2],
                    weight=float(parts[3])))

    def edges(self, concept: str, relation: str) -> list[ConceptNetEdge]:
        concept = slugify(concept)
        return [e for e in self._edges
                if slugify(e.start) == concept and e.relation == relation]


class RecordingConceptNet:
    """Record/replay shim: every edge fetched from the wrapped client is
    appended to a fixture store file, so a live session can be replayed
    offline later."""

    def __init__(self, inner: "ConceptNetClient", record_path: str):
        self.inner = inner
        self.record_path = record_path

    def edges(self, concept: str, relation: str) -> list[ConceptNetEdge]:
        edges = self.inner.edges(concept, relation)
        with open(self.record_path, "a", encoding="utf-8") as f:
            for e in edges:
                f.write(f"{e.start}\t{e.relation}\t{e.end}\t{e.weight}\n")
        return edges


class HttpConceptNet:
    """Live client for the ConceptNet web API query endpoint."""

    def __init__(self, base_url: str = "https://api.conceptnet.io", timeout: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def edges(self, concept: str, relation: str) -> list[ConceptNetEdge]:
        uri = f"/c/en/{slugify(concept)}"
        try:
            resp = httpx.get(f"{self.base_url}/query",
                             params={"start": uri, "rel": f"/r/{relation}",
                                     "limit": 50},
                             timeout=self.timeout)
            resp.raise_for_status()
            payload = resp.json()
        except (httpx.HTTPError, ValueError) as exc:
            raise ConceptNetError(
                f"ConceptNet query for {concept!r}/{relation} failed: {exc}; "
                "retry later or switch to the offline fixture store") from exc
        out = []
        for edge in payload.get("edges", []):
            out.append(ConceptNetEdge(
                start=edge.get("start", {}).get("label", concept),
                relation=relation,
                end=edge.get("end", {}).get("label", ""),
                weight=float(edge.get("weight", 0.0))))
        return out


def conceptnet_query(concept: str, relation: str, client: ConceptNetClient,
                     min_weight: float = 1.0, page_size: int = 20) -> list[ConceptNetEdge]:
    """Edges for a concept/relation, weight-filtered, deduplicated, capped."""
    edges = client.edges(concept, relation)
    seen: set[tuple[str, str]] = set()
    out: list[ConceptNetEdge] = []
    for edge in edges:
        if edge.weight < min_weight:
            continue
        key = (edge.relation, edge.end.lower())
        if key in seen:
            continue
        seen.add(key)
        out.append(edge)
        if len(out) >= page_size:
            break
    return out


# ---------------------------------------------------------------------------
# Common-sense suggestions
# ---------------------------------------------------------------------------

def _display(slug_or_text: str) -> str:
    return " ".join(slug_or_text.split("_"))


def commonsense_suggestions(bundle: DomainBundle, client: ConceptNetClient,
                            table: EmbeddingTable, filters: PhraseFilters,
                            threshold: float, min_weight: float = 1.0,
                            page_size: int = 20) -> list[Suggestion]:
    """Capability, affordance-condition, and affect-trigger suggestions."""
    out: list[Suggestion] = []

    # (1) object type -> capabilities
    for obj in bundle.objects.values():
        if not obj.type_tag:
            continue
        for edge in conceptnet_query(obj.type_tag, "IsCapableOf", client,
                                     min_weight, page_size):
            name = slugify(edge.end)
            if any(a.owner == obj.name and a.name == name for a in bundle.affordances):
                continue
            prompt = CAPABILITY_PROMPT.format(
                name=obj.name.capitalize(), type=obj.type_tag.capitalize(),
                capability=edge.end)
            payload = {"edit": "add-affordance-skeleton", "owner": obj.name,
                       "name": name}
            out.append(make_suggestion("capability", prompt, payload, edge.weight))

    # (2) affordance names -> pre/post-condition questions
    for aff in bundle.affordances:
        display = _display(aff.name)
        existing = {l.state for l in aff.preconditions.literals()}
        existing |= {p.literal.state for p in aff.postconditions}
        for relation in POST_RELATIONS + PRE_RELATIONS:
            role = "post" if relation in POST_RELATIONS else "pre"
            template = POST_PROMPT if role == "post" else PRE_PROMPT
            for edge in conceptnet_query(aff.name, relation, client,
                                         min_weight, page_size):
                if slugify([aff.owner, edge.end]) in existing:
                    continue
                prompt = template.format(end=edge.end, affordance=display)
                payload = {"edit": "add-affordance-condition", "owner": aff.owner,
                           "affordance": aff.name, "role": role,
                           "condition": edge.end}
                out.append(make_suggestion("affordance-condition", prompt,
                                           payload, edge.weight))

    # (3) states -> affect triggers, gated on embedding similarity
    affects = [(AffectKind.EMOTION, e.name) for e in bundle.emotion_catalog]
    affects += [(AffectKind.MOTIVATION, f) for f in bundle.motivation_catalog.factors]
    for decl in bundle.states.values():
        concept = "_".join(decl.name_words())
        for relation in AFFECT_RELATIONS:
            for edge in conceptnet_query(concept, relation, client,
                                         min_weight, page_size):
                evec = phrase_vector(edge.end.split(), table, filters)
                if evec is None:
                    continue
                best: tuple[float, AffectKind, str] | None = None
                for kind, name in affects:
                    tvec = phrase_vector([name], table, filters)
                    if tvec is None:
                        continue
                    score = similarity(evec, tvec)
                    if best is None or score > best[0]:
                        best = (score, kind, name)
                if best is None or best[0] < threshold:
                    continue
                score, kind, name = best
                if any(_rule_covers(r, decl.id, kind, name)
                       for r in bundle.affect_rules):
                    continue
                state_phrase = " ".join(decl.name_words())
                prompt = AFFECT_PROMPT.format(state=state_phrase,
                                              kind=kind.value, target=name)
                payload = {
                    "edit": "add-affect-rule",
                    "state": decl.id,
                    "value": decl.values[0] if decl.kind is StateKind.FLUENT else None,
                    "target_kind": kind.value,
                    "target_name": name,
                }
                out.append(make_suggestion("affect-trigger", prompt, payload, score))
    return sort_suggestions(out)


# ---------------------------------------------------------------------------
# Applying accepted suggestions
# ---------------------------------------------------------------------------

def apply_suggestion(bundle: DomainBundle, suggestion: Suggestion,
                     default_magnitude: float = 0.2) -> None:
    """Apply an accepted suggestion's payload edit to the bundle in place."""
    payload = suggestion.payload
    edit = payload.get("edit")
    if edit == "add-affordance-skeleton":
        from .domain_model import Affordance

        bundle.add_affordance(Affordance(name=payload["name"],
                                         owner=payload["owner"]))
    elif edit == "add-affect-rule":
        lit = Literal(payload["state"], value=payload.get("value"))
        bundle.add_affect_rule(AffectRule(
            condition=Cnf(((lit,),)),
            target=AffectTarget(AffectKind(payload["target_kind"]),
                                payload.get("target_name")),
            change=AffectChange(ChangeMode.SHIFT, default_magnitude)))
    elif edit == "add-affordance-condition":
        from .domain_model import Affordance, PostCondition, StateTriple

        sid = bundle.intern_state(
            StateTriple(payload["owner"], slugify(payload["condition"])),
            StateKind.BINARY)
        for i, aff in enumerate(bundle.affordances):
            if aff.owner == payload["owner"] and aff.name == payload["affordance"]:
                if payload["role"] == "pre":
                    clauses = aff.preconditions.clauses + ((Literal(sid),),)
                    bundle.affordances[i] = replace(
                        aff, preconditions=Cnf(clauses))
                else:
                    posts = aff.postconditions + (PostCondition(Literal(sid)),)
                    bundle.affordances[i] = replace(aff, postconditions=posts)
                return
        raise DomainError(f"affordance {payload['affordance']!r} not found")
    elif edit == "clarify-affordance":
        pass  # a question for the author; acceptance acknowledges it
    else:
        raise DomainError(f"unknown suggestion edit {edit!r}")
