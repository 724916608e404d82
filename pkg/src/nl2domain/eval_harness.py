"""Gold-corpus scoring: state precision/recall and condition accuracy.

Each gold case runs through a fresh pipeline; extracted states match on exact
normalized triples, conditions on unified state identifier, polarity, and
probability bucket.  Extra states are counted separately and do not lower
recall.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .config import data_path
from .domain_model import DomainBundle, StateKind, StateTriple, slugify
from .pipeline import Pipeline, Resources


class GoldError(ValueError):
    pass


@dataclass(frozen=True)
class GoldSentence:
    text: str
    category: str | None = None
    conllu: str | None = None


@dataclass(frozen=True)
class GoldCase:
    name: str
    sentences: tuple[GoldSentence, ...]
    expected_states: tuple[dict, ...] = ()
    expected_affordances: tuple[dict, ...] = ()
    expected_rules: tuple[dict, ...] = ()


def load_gold(path: str | Path | None = None) -> list[GoldCase]:
    path = Path(path) if path else data_path("gold_corpus.json")
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    cases: list[GoldCase] = []
    for i, entry in enumerate(raw.get("cases", [])):
        where = f"case {i} ({entry.get('name', 'unnamed')!r})"
        if "name" not in entry:
            raise GoldError(f"{where}: missing 'name'")
        if not entry.get("sentences"):
            raise GoldError(f"{where}: missing 'sentences'")
        sentences = []
        for j, s in enumerate(entry["sentences"]):
            if isinstance(s, str):
                sentences.append(GoldSentence(text=s))
            elif isinstance(s, dict) and "text" in s:
                sentences.append(GoldSentence(text=s["text"],
                                              category=s.get("category"),
                                              conllu=s.get("conllu")))
            else:
                raise GoldError(f"{where}: sentence {j} must be a string or "
                                "an object with 'text'")
        for key in ("expected_states", "expected_affordances", "expected_rules"):
            if not isinstance(entry.get(key, []), list):
                raise GoldError(f"{where}: {key} must be a list")
        for st in entry.get("expected_states", []):
            for required in ("subject", "predicate", "kind"):
                if required not in st:
                    raise GoldError(f"{where}: expected state missing {required!r}")
        cases.append(GoldCase(
            name=entry["name"],
            sentences=tuple(sentences),
            expected_states=tuple(entry.get("expected_states", [])),
            expected_affordances=tuple(entry.get("expected_affordances", [])),
            expected_rules=tuple(entry.get("expected_rules", [])),
        ))
    return cases


def condition_accuracy(correct: int, total: int) -> float:
    """Fraction of gold conditions correctly identified."""
    if total == 0:
        return 1.0
    return correct / total


@dataclass
class CaseResult:
    name: str
    gold_facts: int = 0
    matched_facts: int = 0
    extracted_facts: int = 0
    gold_conditions: int = 0
    correct_conditions: int = 0
    gold_rules: int = 0
    correct_rules: int = 0
    extras: list[str] = field(default_factory=list)
    diffs: list[str] = field(default_factory=list)


@dataclass
class ScoreReport:
    cases: list[CaseResult] = field(default_factory=list)

    @property
    def state_recall(self) -> float:
        total = sum(c.gold_facts for c in self.cases)
        return 1.0 if total == 0 else sum(c.matched_facts for c in self.cases) / total

    @property
    def state_precision(self) -> float:
        total = sum(c.extracted_facts for c in self.cases)
        return 1.0 if total == 0 else sum(c.matched_facts for c in self.cases) / total

    @property
    def condition_accuracy(self) -> float:
        return condition_accuracy(sum(c.correct_conditions for c in self.cases),
                                  sum(c.gold_conditions for c in self.cases))

    @property
    def extra_state_count(self) -> int:
        return sum(len(c.extras) for c in self.cases)

    def as_dict(self) -> dict:
        return {
            "state_recall": self.state_recall,
            "state_precision": self.state_precision,
            "condition_accuracy": self.condition_accuracy,
            "extra_state_count": self.extra_state_count,
            "cases": [
                {"name": c.name, "gold_facts": c.gold_facts,
                 "matched_facts": c.matched_facts,
                 "extracted_facts": c.extracted_facts,
                 "gold_conditions": c.gold_conditions,
                 "correct_conditions": c.correct_conditions,
                 "gold_rules": c.gold_rules, "correct_rules": c.correct_rules,
                 "extras": c.extras, "diffs": c.diffs}
                for c in self.cases
            ],
        }

    def summary(self) -> str:
        lines = [
            f"state recall:        {self.state_recall:.4f}",
            f"state precision:     {self.state_precision:.4f}",
            f"condition accuracy:  {self.condition_accuracy:.4f}",
            f"extra states:        {self.extra_state_count}",
        ]
        for c in self.cases:
            status = "ok" if not c.diffs else "DIFF"
            lines.append(f"  [{status}] {c.name}: states {c.matched_facts}/"
                         f"{c.gold_facts}, conditions {c.correct_conditions}/"
                         f"{c.gold_conditions}")
            for d in c.diffs:
                lines.append(f"        - {d}")
        return "\n".join(lines)


def _bundle_facts(bundle: DomainBundle) -> set[tuple]:
    facts: set[tuple] = set()
    for decl in bundle.states.values():
        if decl.kind is StateKind.BINARY:
            t = decl.triple
            facts.add(("binary", t.subject, t.predicate, t.complement))
        else:
            subject = decl.owner
            predicate = "_".join(decl.name_words())
            for value in decl.values:
                facts.add(("fluent", subject, predicate, value))
    return facts


def _gold_fact(entry: dict) -> tuple:
    return (entry["kind"], slugify(entry["subject"]), slugify(entry["predicate"]),
            slugify(entry["complement"]) if entry.get("complement") else "")


def _find_literal_state(bundle: DomainBundle, entry: dict) -> tuple[str, str | None] | None:
    """Resolve a gold condition triple to (state id, fluent value or None)."""
    triple = StateTriple(entry["subject"], entry["predicate"],
                         entry.get("complement", "")).normalized()
    decl = bundle.binary_for(triple)
    if decl is not None:
        return decl.id, None
    fluent = bundle.fluent_for(triple.subject, triple.predicate)
    if fluent is not None and triple.complement in fluent.values:
        return fluent.id, triple.complement
    return None


def score(cases: list[GoldCase], resources: Resources) -> ScoreReport:
    report = ScoreReport()
    pipeline = Pipeline(resources)
    for case in cases:
        result = CaseResult(name=case.name)
        bundle = pipeline.new_bundle()
        for sentence in case.sentences:
            bundle, _rep = pipeline.process_text(
                bundle, sentence.text, category=sentence.category,
                conllu=sentence.conllu, regenerate=False)

        facts = _bundle_facts(bundle)
        gold_facts = {_gold_fact(e) for e in case.expected_states}
        result.gold_facts = len(gold_facts)
        result.extracted_facts = len(facts)
        result.matched_facts = len(facts & gold_facts)
        result.extras = sorted("/".join(f) for f in facts - gold_facts)
        for missing in sorted(gold_facts - facts):
            result.diffs.append(f"missing state {'/'.join(missing)}")

        for expected in case.expected_affordances:
            owner = slugify(expected["owner"])
            name = slugify(expected["name"])
            actual = next((a for a in bundle.affordances
                           if a.owner == owner and a.name == name), None)
            pres = expected.get("pre", [])
            posts = expected.get("post", [])
            result.gold_conditions += len(pres) + len(posts)
            if actual is None:
                result.diffs.append(f"missing affordance {owner}.{name}")
                continue
            actual_pre = {(l.state, l.polarity, l.value)
                          for clause in actual.preconditions.clauses
                          for l in clause}
            for entry in pres:
                resolved = _find_literal_state(bundle, entry)
                want_polarity = bool(entry.get("polarity", True))
                if resolved and (resolved[0], want_polarity, resolved[1]) in actual_pre:
                    result.correct_conditions += 1
                else:
                    result.diffs.append(
                        f"{owner}.{name}: precondition {entry} not found")
            actual_post = {(p.literal.state, p.literal.polarity,
                            p.literal.value, p.probability)
                           for p in actual.postconditions}
            for entry in posts:
                resolved = _find_literal_state(bundle, entry)
                want_polarity = bool(entry.get("polarity", True))
                want_p = float(entry.get("probability", 1.0))
                hit = resolved is not None and any(
                    s == resolved[0] and pol == want_polarity and v == resolved[1]
                    and abs(p - want_p) < 1e-9
                    for s, pol, v, p in actual_post)
                if hit:
                    result.correct_conditions += 1
                else:
                    result.diffs.append(
                        f"{owner}.{name}: postcondition {entry} not found")

        for expected in case.expected_rules:
            result.gold_rules += 1
            want_states = set()
            ok = True
            for entry in expected.get("condition", []):
                resolved = _find_literal_state(bundle, entry)
                if resolved is None:
                    ok = False
                    break
                want_states.add(resolved[0])
            hit = ok and any(
                r.target.kind.value == expected["target_kind"]
                and (r.target.name or "") == expected.get("target_name", "")
                and r.change.mode.value == expected["mode"]
                and abs(r.change.magnitude - float(expected["magnitude"])) < 1e-9
                and want_states <= {l.state for l in r.condition.literals()}
                for r in bundle.affect_rules)
            if hit:
                result.correct_rules += 1
            else:
                result.diffs.append(f"rule {expected} not found")

        report.cases.append(result)
    return report
