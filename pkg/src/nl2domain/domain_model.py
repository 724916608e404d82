"""Core domain objects: smart-object states, affordances and affect rules.

Everything in this module is an immutable value except :class:`DomainBundle`,
which is the registry the session layer edits (one writer per session).
Bundles serialize to a canonical, key-sorted JSON text file so that session
persistence and golden tests are byte-stable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence


class DomainError(ValueError):
    """A construction or lookup violated a domain invariant."""


# ---------------------------------------------------------------------------
# Slugs
# ---------------------------------------------------------------------------

_SLUG_RE = re.compile(r"^[a-z0-9]+(_[a-z0-9]+)*$")
_ARTICLES = {"a", "an", "the", "some", "any"}

# Words that end in -s but are not plurals (or whose plural form is the
# canonical one for our purposes).  "has" is kept as-is so that states like
# (max, has, money) keep the surface predicate used throughout the corpus.
_KEEP_FINAL_S = {
    "has", "is", "was", "its", "his", "this", "us", "as",
    "news", "series", "species", "bus", "gas", "glass", "class", "grass",
    "less", "chess", "lens", "plus", "yes", "chaos", "kindness", "business",
    "physics", "mathematics", "analysis", "basis",
}

# Irregular plural -> singular overrides applied before the suffix rules.
_IRREGULAR_SINGULAR = {
    "children": "child",
    "people": "person",
    "mice": "mouse",
    "feet": "foot",
    "teeth": "tooth",
    "buses": "bus",
    "glasses": "glass",
    "classes": "class",
    "dishes": "dish",
    "boxes": "box",
    "wolves": "wolf",
    "leaves": "leaf",
}


def singularize(word: str) -> str:
    """Singularize a lowercase word with simple suffix rules.

    Deliberately small: -ies -> -y, -s -> (nothing), plus exception lists.
    """
    if word in _KEEP_FINAL_S:
        return word
    if word in _IRREGULAR_SINGULAR:
        return _IRREGULAR_SINGULAR[word]
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("ss", "us", "is")):
        return word
    if word.endswith("s") and len(word) > 2:
        return word[:-1]
    return word


def slugify(phrase: str | Sequence[str]) -> str:
    """Normalize a word sequence into a lowercase underscore identifier.

    Articles are dropped, nouns are singularized, everything else is
    lowercased and joined with underscores.  Idempotent: slugify(slugify(x))
    == slugify(x).
    """
    if isinstance(phrase, str):
        words = re.split(r"[\s_]+", phrase.strip())
    else:
        words = [w for part in phrase for w in re.split(r"[\s_]+", str(part).strip())]
    cleaned = []
    for raw in words:
        word = re.sub(r"[^a-z0-9]+", "", raw.lower())
        if not word or word in _ARTICLES:
            continue
        cleaned.append(singularize(word))
    if not cleaned:
        raise DomainError(f"cannot slugify {phrase!r}: no content words")
    return "_".join(cleaned)


def is_slug(text: str) -> bool:
    return bool(_SLUG_RE.match(text))


def check_slug(text: str, what: str = "identifier") -> str:
    if not is_slug(text):
        raise DomainError(f"invalid {what}: {text!r}")
    return text


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

class StateKind(str, Enum):
    BINARY = "binary"
    FLUENT = "fluent"


@dataclass(frozen=True)
class StateTriple:
    """An extracted (subject, predicate, complement) fact.

    The complement may be empty for intransitive binary facts such as
    (max, be_tired, "").
    """

    subject: str
    predicate: str
    complement: str = ""

    def normalized(self) -> "StateTriple":
        return StateTriple(
            slugify(self.subject),
            slugify(self.predicate),
            slugify(self.complement) if self.complement else "",
        )

    def words(self) -> list[str]:
        """Content words of the state name (subject excluded)."""
        words = self.predicate.split("_")
        if self.complement:
            words += self.complement.split("_")
        return words


@dataclass(frozen=True)
class StateDecl:
    """A declared state: either one binary fact or an n-ary fluent."""

    id: str
    owner: str
    kind: StateKind
    triple: StateTriple | None = None          # binary only
    variable: str | None = None                # fluent only
    values: tuple[str, ...] = ()               # fluent only, ordered, unique

    def __post_init__(self) -> None:
        check_slug(self.id, "state id")
        if self.kind is StateKind.BINARY:
            if self.triple is None or self.variable is not None or self.values:
                raise DomainError(f"binary state {self.id} must carry exactly one triple")
        else:
            if self.variable is None or self.triple is not None:
                raise DomainError(f"fluent state {self.id} must carry a variable and values")
            if len(set(self.values)) != len(self.values):
                raise DomainError(f"fluent {self.id} has duplicate values")

    def name_words(self) -> list[str]:
        """Words used when matching this state in embedding space."""
        if self.kind is StateKind.BINARY:
            assert self.triple is not None
            return self.triple.words()
        assert self.variable is not None
        prefix = self.owner + "_"
        name = self.variable[len(prefix):] if self.variable.startswith(prefix) else self.variable
        return name.split("_")


def binary_state(owner: str, triple: StateTriple, state_id: str | None = None) -> StateDecl:
    triple = triple.normalized()
    sid = state_id or slugify([triple.subject, triple.predicate, triple.complement]
                              if triple.complement else [triple.subject, triple.predicate])
    return StateDecl(id=sid, owner=slugify(owner), kind=StateKind.BINARY, triple=triple)


def fluent_state(owner: str, variable: str, values: Iterable[str],
                 state_id: str | None = None) -> StateDecl:
    variable = slugify(variable)
    vals = tuple(dict.fromkeys(slugify(v) for v in values))
    return StateDecl(id=state_id or variable, owner=slugify(owner),
                     kind=StateKind.FLUENT, variable=variable, values=vals)


# ---------------------------------------------------------------------------
# Logic over states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Literal:
    """An atom of the condition language.

    ``value`` is required exactly when the referenced state is a fluent, and
    asserts ``fluent == value``.
    """

    state: str
    polarity: bool = True
    value: str | None = None

    def holds(self, assignment: Mapping[str, object]) -> bool:
        if self.state not in assignment:
            raise DomainError(f"state {self.state!r} is not assigned")
        actual = assignment[self.state]
        if self.value is None:
            satisfied = bool(actual)
        else:
            satisfied = actual == self.value
        return satisfied == self.polarity


@dataclass(frozen=True)
class Cnf:
    """Conjunction of disjunctions of literals.  Empty CNF is true."""

    clauses: tuple[tuple[Literal, ...], ...] = ()

    def __post_init__(self) -> None:
        for clause in self.clauses:
            if not clause:
                raise DomainError("CNF clause must not be empty")

    def literals(self) -> list[Literal]:
        return [lit for clause in self.clauses for lit in clause]

    @staticmethod
    def conjunction(literals: Iterable[Literal]) -> "Cnf":
        """One singleton clause per literal (a pure AND)."""
        return Cnf(tuple((lit,) for lit in literals))


def eval_cnf(cnf: Cnf, assignment: Mapping[str, object]) -> bool:
    """True iff every clause has at least one satisfied literal."""
    return all(any(lit.holds(assignment) for lit in clause) for clause in cnf.clauses)


# ---------------------------------------------------------------------------
# Affordances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PostCondition:
    """An effect literal with its probability; p < 1 models side effects.

    Probability bounds are checked by validate_bundle (diagnostic
    ``bad-probability``), not at construction, so loaded bundles can be
    inspected rather than rejected.
    """

    literal: Literal
    probability: float = 1.0

    @property
    def deterministic(self) -> bool:
        return self.probability == 1.0


@dataclass(frozen=True)
class Affordance:
    name: str
    owner: str
    preconditions: Cnf = Cnf()
    postconditions: tuple[PostCondition, ...] = ()

    def __post_init__(self) -> None:
        check_slug(self.name, "affordance name")
        check_slug(self.owner, "affordance owner")


# ---------------------------------------------------------------------------
# Affect
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmotionSpec:
    """An emotion as a point in Pleasure-Arousal-Dominance space."""

    name: str
    pad: tuple[float, float, float]

    def __post_init__(self) -> None:
        check_slug(self.name, "emotion name")
        if len(self.pad) != 3 or any(not -1.0 <= c <= 1.0 for c in self.pad):
            raise DomainError(f"emotion {self.name}: PAD coordinates must lie in [-1, 1]")


@dataclass(frozen=True)
class MotivationCatalog:
    """Ordered motivation factor names; runtime values live in [0, 1]."""

    factors: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.factors)) != len(self.factors):
            raise DomainError("motivation factors must be unique")
        for f in self.factors:
            check_slug(f, "motivation factor")

    def __contains__(self, name: str) -> bool:
        return name in self.factors


class AffectKind(str, Enum):
    MOOD = "mood"
    EMOTION = "emotion"
    MOTIVATION = "motivation"


@dataclass(frozen=True)
class AffectTarget:
    kind: AffectKind
    name: str | None = None

    def __post_init__(self) -> None:
        if self.kind is AffectKind.MOOD:
            if self.name is not None:
                raise DomainError("mood target carries no name")
        elif self.name is None:
            raise DomainError(f"{self.kind.value} target requires a name")


class ChangeMode(str, Enum):
    SHIFT = "shift"
    SET = "set"


@dataclass(frozen=True)
class AffectChange:
    mode: ChangeMode
    magnitude: float

    def __post_init__(self) -> None:
        if self.mode is ChangeMode.SET and not 0.0 <= self.magnitude <= 1.0:
            raise DomainError("set-mode magnitude must lie in [0, 1]")
        if self.mode is ChangeMode.SHIFT and abs(self.magnitude) > 1.0:
            raise DomainError("shift magnitude must lie in [-1, 1]")


@dataclass(frozen=True)
class AffectRule:
    """CNF state condition -> mood/emotion/motivation change."""

    condition: Cnf
    target: AffectTarget
    change: AffectChange

    def __post_init__(self) -> None:
        if self.change.mode is ChangeMode.SET and self.target.kind is not AffectKind.MOTIVATION:
            raise DomainError("set mode is only valid for motivation targets")

    def sort_key(self) -> tuple:
        return (self.target.kind.value, self.target.name or "",
                self.change.mode.value, self.change.magnitude,
                tuple(tuple((l.state, l.polarity, l.value or "") for l in c)
                      for c in self.condition.clauses))


# ---------------------------------------------------------------------------
# Smart objects and the bundle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmartObject:
    name: str
    type_tag: str = ""

    def __post_init__(self) -> None:
        check_slug(self.name, "object name")


@dataclass(frozen=True)
class Diagnostic:
    """A machine-readable validation finding; never an exception."""

    code: str
    subject: str
    message: str


class DomainBundle:
    """The full authored domain: objects, states, affordances, affect rules.

    All contained values are immutable; the bundle itself is an insertion-
    ordered registry.  ``clone()`` gives the session layer cheap per-sentence
    atomicity.
    """

    def __init__(self,
                 emotion_catalog: Sequence[EmotionSpec] = (),
                 motivation_catalog: MotivationCatalog | None = None) -> None:
        self.objects: dict[str, SmartObject] = {}
        self.states: dict[str, StateDecl] = {}
        self.affordances: list[Affordance] = []
        self.affect_rules: list[AffectRule] = []
        self.emotion_catalog: tuple[EmotionSpec, ...] = tuple(emotion_catalog)
        self.motivation_catalog: MotivationCatalog = (
            motivation_catalog or MotivationCatalog(factors=()))

    # -- objects ------------------------------------------------------------

    def add_object(self, name: str, type_tag: str = "") -> SmartObject:
        slug = slugify(name)
        existing = self.objects.get(slug)
        if existing is not None:
            if type_tag and not existing.type_tag:
                existing = SmartObject(slug, slugify(type_tag))
                self.objects[slug] = existing
            return existing
        obj = SmartObject(slug, slugify(type_tag) if type_tag else "")
        self.objects[slug] = obj
        return obj

    # -- states ---------------------------------------------------------------

    def emotion_names(self) -> list[str]:
        return [e.name for e in self.emotion_catalog]

    def fluent_for(self, subject: str, predicate: str) -> StateDecl | None:
        variable = f"{subject}_{predicate}"
        decl = self.states.get(variable)
        if decl is not None and decl.kind is StateKind.FLUENT:
            return decl
        for decl in self.states.values():
            if decl.kind is StateKind.FLUENT and decl.variable == variable:
                return decl
        return None

    def binary_for(self, triple: StateTriple) -> StateDecl | None:
        for decl in self.states.values():
            if decl.kind is StateKind.BINARY and decl.triple == triple:
                return decl
        return None

    def _fresh_id(self, base: str) -> str:
        if base not in self.states:
            return base
        n = 2
        while f"{base}_{n}" in self.states:
            n += 1
        return f"{base}_{n}"

    def intern_state(self, triple: StateTriple, kind: StateKind) -> str:
        """Register a state, reusing an existing declaration when possible.

        Binary triples dedupe on the full normalized triple.  Fluent triples
        group on (subject, predicate): the complement extends that fluent's
        value domain.  Mixing kinds over the same facts is an error.
        """
        triple = triple.normalized()
        if kind is StateKind.BINARY:
            existing = self.binary_for(triple)
            if existing is not None:
                return existing.id
            fluent = self.fluent_for(triple.subject, triple.predicate)
            if fluent is not None:
                raise DomainError(
                    f"triple {triple} was requested as binary but fluent "
                    f"{fluent.id!r} already groups (subject, predicate) "
                    f"({triple.subject}, {triple.predicate})")
            decl = binary_state(triple.subject, triple,
                                state_id=self._fresh_id(
                                    slugify([triple.subject, triple.predicate, triple.complement]
                                            if triple.complement
                                            else [triple.subject, triple.predicate])))
            self.states[decl.id] = decl
            self.add_object(triple.subject)
            return decl.id

        if not triple.complement:
            raise DomainError(f"fluent triple {triple} requires a complement value")
        conflicting = self.binary_for(triple)
        if conflicting is not None:
            raise DomainError(
                f"triple {triple} was requested as fluent but binary state "
                f"{conflicting.id!r} already declares it")
        fluent = self.fluent_for(triple.subject, triple.predicate)
        if fluent is not None:
            if triple.complement not in fluent.values:
                self.states[fluent.id] = replace(
                    fluent, values=fluent.values + (triple.complement,))
            return fluent.id
        variable = f"{triple.subject}_{triple.predicate}"
        decl = fluent_state(triple.subject, variable, [triple.complement],
                            state_id=self._fresh_id(variable))
        self.states[decl.id] = decl
        self.add_object(triple.subject)
        return decl.id

    # -- affordances and rules ------------------------------------------------

    def add_affordance(self, affordance: Affordance) -> None:
        for existing in self.affordances:
            if existing.owner == affordance.owner and existing.name == affordance.name:
                raise DomainError(
                    f"affordance {affordance.name!r} already exists for owner "
                    f"{affordance.owner!r}")
        self.affordances.append(affordance)
        self.add_object(affordance.owner)

    def add_affect_rule(self, rule: AffectRule) -> None:
        self.affect_rules.append(rule)

    # -- validation -------------------------------------------------------------

    def _check_literal(self, lit: Literal, where: str, out: list[Diagnostic]) -> None:
        decl = self.states.get(lit.state)
        if decl is None:
            out.append(Diagnostic("dangling-state", where,
                                  f"{where} references undeclared state {lit.state!r}"))
            return
        if decl.kind is StateKind.FLUENT:
            if lit.value is None:
                out.append(Diagnostic("missing-fluent-value", where,
                                      f"{where}: literal over fluent {lit.state!r} needs a value"))
            elif lit.value not in decl.values:
                out.append(Diagnostic("unknown-fluent-value", where,
                                      f"{where}: {lit.value!r} not in domain of {lit.state!r}"))
        elif lit.value is not None:
            out.append(Diagnostic("unexpected-fluent-value", where,
                                  f"{where}: binary state {lit.state!r} takes no value"))

    def validate(self) -> list[Diagnostic]:
        """All invariant violations as diagnostics; empty means valid."""
        out: list[Diagnostic] = []
        for decl in self.states.values():
            if decl.owner not in self.objects:
                out.append(Diagnostic("dangling-owner", decl.id,
                                      f"state {decl.id!r} owner {decl.owner!r} is not declared"))
            if decl.kind is StateKind.FLUENT and len(decl.values) < 2:
                out.append(Diagnostic("fluent-domain-size", decl.id,
                                      f"fluent {decl.id!r} needs at least 2 values"))
        for aff in self.affordances:
            where = f"affordance {aff.owner}.{aff.name}"
            if aff.owner not in self.objects:
                out.append(Diagnostic("dangling-owner", aff.name,
                                      f"{where}: owner is not declared"))
            for lit in aff.preconditions.literals():
                self._check_literal(lit, where, out)
            for post in aff.postconditions:
                self._check_literal(post.literal, where, out)
                if not 0.0 < post.probability <= 1.0:
                    out.append(Diagnostic("bad-probability", aff.name,
                                          f"{where}: probability {post.probability} outside (0, 1]"))
        for i, rule in enumerate(self.affect_rules):
            where = f"rule[{i}]"
            for lit in rule.condition.literals():
                self._check_literal(lit, where, out)
            if rule.target.kind is AffectKind.EMOTION and \
                    rule.target.name not in self.emotion_names():
                out.append(Diagnostic("unknown-emotion", where,
                                      f"{where}: emotion {rule.target.name!r} not in catalog"))
            if rule.target.kind is AffectKind.MOTIVATION and \
                    rule.target.name not in self.motivation_catalog:
                out.append(Diagnostic("unknown-motivation", where,
                                      f"{where}: motivation {rule.target.name!r} not in catalog"))
        return out

    # -- persistence ---------------------------------------------------------

    def clone(self) -> "DomainBundle":
        other = DomainBundle(self.emotion_catalog, self.motivation_catalog)
        other.objects = dict(self.objects)
        other.states = dict(self.states)
        other.affordances = list(self.affordances)
        other.affect_rules = list(self.affect_rules)
        return other

    def to_dict(self) -> dict:
        def lit(l: Literal) -> dict:
            d: dict = {"state": l.state, "polarity": l.polarity}
            if l.value is not None:
                d["value"] = l.value
            return d

        return {
            "objects": [{"name": o.name, "type": o.type_tag}
                        for o in sorted(self.objects.values(), key=lambda o: o.name)],
            "states": [
                ({"id": s.id, "owner": s.owner, "kind": s.kind.value,
                  "triple": {"subject": s.triple.subject,
                             "predicate": s.triple.predicate,
                             "complement": s.triple.complement}}
                 if s.kind is StateKind.BINARY else
                 {"id": s.id, "owner": s.owner, "kind": s.kind.value,
                  "variable": s.variable, "values": list(s.values)})
                for s in sorted(self.states.values(), key=lambda s: s.id)
            ],
            "affordances": [
                {"name": a.name, "owner": a.owner,
                 "preconditions": [[lit(l) for l in clause]
                                   for clause in a.preconditions.clauses],
                 "postconditions": [{"literal": lit(p.literal),
                                     "probability": p.probability}
                                    for p in a.postconditions]}
                for a in sorted(self.affordances, key=lambda a: (a.owner, a.name))
            ],
            "affect_rules": [
                {"condition": [[lit(l) for l in clause]
                               for clause in r.condition.clauses],
                 "target": {"kind": r.target.kind.value,
                            **({"name": r.target.name} if r.target.name else {})},
                 "change": {"mode": r.change.mode.value,
                            "magnitude": r.change.magnitude}}
                for r in sorted(self.affect_rules, key=lambda r: r.sort_key())
            ],
            "emotion_catalog": [{"name": e.name, "pad": list(e.pad)}
                                for e in self.emotion_catalog],
            "motivation_catalog": list(self.motivation_catalog.factors),
        }

    def to_canonical_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @staticmethod
    def from_dict(data: Mapping) -> "DomainBundle":
        def lit(d: Mapping) -> Literal:
            return Literal(d["state"], bool(d["polarity"]), d.get("value"))

        bundle = DomainBundle(
            emotion_catalog=[EmotionSpec(e["name"], tuple(e["pad"]))
                             for e in data.get("emotion_catalog", [])],
            motivation_catalog=MotivationCatalog(
                tuple(data.get("motivation_catalog", []))),
        )
        for o in data.get("objects", []):
            bundle.objects[o["name"]] = SmartObject(o["name"], o.get("type", ""))
        for s in data.get("states", []):
            if s["kind"] == StateKind.BINARY.value:
                t = s["triple"]
                decl = StateDecl(id=s["id"], owner=s["owner"], kind=StateKind.BINARY,
                                 triple=StateTriple(t["subject"], t["predicate"],
                                                    t.get("complement", "")))
            else:
                decl = StateDecl(id=s["id"], owner=s["owner"], kind=StateKind.FLUENT,
                                 variable=s["variable"], values=tuple(s["values"]))
            bundle.states[decl.id] = decl
        for a in data.get("affordances", []):
            bundle.affordances.append(Affordance(
                name=a["name"], owner=a["owner"],
                preconditions=Cnf(tuple(tuple(lit(l) for l in clause)
                                        for clause in a["preconditions"])),
                postconditions=tuple(PostCondition(lit(p["literal"]), p["probability"])
                                     for p in a["postconditions"])))
        for r in data.get("affect_rules", []):
            bundle.affect_rules.append(AffectRule(
                condition=Cnf(tuple(tuple(lit(l) for l in clause)
                                    for clause in r["condition"])),
                target=AffectTarget(AffectKind(r["target"]["kind"]),
                                    r["target"].get("name")),
                change=AffectChange(ChangeMode(r["change"]["mode"]),
                                    r["change"]["magnitude"])))
        return bundle

    @staticmethod
    def from_canonical_text(text: str) -> "DomainBundle":
        return DomainBundle.from_dict(json.loads(text))

    def structurally_equal(self, other: "DomainBundle") -> bool:
        return self.to_dict() == other.to_dict()


def validate_bundle(bundle: DomainBundle) -> list[Diagnostic]:
    return bundle.validate()
