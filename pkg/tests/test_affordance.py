import re

import pytest

from nl2domain.affordance_extraction import (
    AffordanceDraft,
    MarkerCatalog,
    derive_affordance_name,
    detect_probability,
    extract_conditions,
    load_probability_keywords,
    split_affordance,
    unify_condition,
)
from nl2domain.domain_model import (
    DomainBundle,
    DomainError,
    StateKind,
    StateTriple,
)
from nl2domain.ingestion import builtin_parse
from nl2domain.semantics import PhraseFilters, load_embeddings

from conftest import AFFORDANCE_SENTENCE


@pytest.fixture(scope="module")
def markers():
    return MarkerCatalog.load()


@pytest.fixture(scope="module")
def table():
    return load_embeddings()


@pytest.fixture(scope="module")
def filters():
    return PhraseFilters.load()


class TestSplitAffordance:
    def test_worked_example(self, markers):
        draft = split_affordance(AFFORDANCE_SENTENCE, markers)
        assert draft is not None
        assert draft.head_text == "Max goes to the library"
        assert draft.pre_text == "he has an exam"
        assert draft.post_text == "he feels more knowledgeable."
        assert draft.pre_marker == "only if"
        assert draft.post_marker == "after which"

    def test_no_marker_is_not_an_affordance(self, markers):
        assert split_affordance("Max can stand at the bus station.", markers) is None

    def test_pre_marker_only(self, markers):
        draft = split_affordance("Max sleeps only if he is tired", markers)
        assert draft is not None
        assert draft.head_text == "Max sleeps"
        assert draft.pre_text == "he is tired"
        assert draft.post_text is None

    def test_longest_marker_wins(self, markers):
        draft = split_affordance("Max sleeps only if he is tired", markers)
        assert draft.pre_marker == "only if"  # not the bare "if"

    def test_reassembly_reproduces_sentence(self, markers):
        sentences = [
            AFFORDANCE_SENTENCE,
            "Max sleeps only if he is tired",
            "Max exercises only if he is hungry after which he probably feels tired.",
            "Max buys food only if he possesses cash after which he feels happy.",
        ]
        for sentence in sentences:
            draft = split_affordance(sentence, markers)
            parts = [draft.head_text]
            if draft.pre_marker:
                parts += [draft.pre_marker, draft.pre_text]
            if draft.post_marker:
                # post may precede pre in exotic formulations; not here
                parts += [draft.post_marker, draft.post_text]
            rebuilt = " ".join(p for p in parts if p)
            assert re.sub(r"\s+", " ", rebuilt) == re.sub(r"\s+", " ", sentence)

    def test_empty_head_is_rejected(self):
        with pytest.raises(DomainError):
            AffordanceDraft(head_text="   ")


class TestDeriveAffordanceName:
    def test_verb_preposition_object(self):
        head = "Max goes to the library"
        assert derive_affordance_name(head, builtin_parse(head)) == "go_to_library"

    def test_bare_verb(self):
        head = "Max sleeps"
        assert derive_affordance_name(head, builtin_parse(head)) == "sleep"

    def test_verb_direct_object(self):
        head = "Max plays the guitar"
        assert derive_affordance_name(head, builtin_parse(head)) == "play_guitar"


class TestExtractConditions:
    def test_possessive_subject_resolution(self):
        triples = extract_conditions("he has an exam", context=["max"])
        assert [(t.subject, t.predicate, t.complement) for t in triples] == \
            [("max", "has", "exam")]

    def test_adjectival_result(self):
        triples = extract_conditions("he feels more knowledgeable", context=["max"])
        assert [(t.subject, t.predicate, t.complement) for t in triples] == \
            [("max", "feel", "knowledgeable")]

    def test_empty_segment(self):
        assert extract_conditions("") == []

    def test_conjoined_conditions(self):
        triples = extract_conditions("he has an exam and he has a pen",
                                     context=["max"])
        assert len(triples) == 2


class TestUnifyCondition:
    def test_exact_triple_matches_at_similarity_one(self, table, filters):
        bundle = DomainBundle()
        sid = bundle.intern_state(StateTriple("max", "has", "money"),
                                  StateKind.BINARY)
        out = unify_condition(StateTriple("max", "has", "money"), bundle,
                              table, 0.75, filters)
        assert out.literal is not None and out.literal.state == sid
        assert out.similarity == pytest.approx(1.0)
        assert out.matched == sid

    def test_semantic_match_reuses_state(self, table, filters):
        bundle = DomainBundle()
        sid = bundle.intern_state(StateTriple("max", "has", "money"),
                                  StateKind.BINARY)
        before = len(bundle.states)
        out = unify_condition(StateTriple("max", "possess", "cash"), bundle,
                              table, 0.75, filters)
        assert out.literal is not None and out.literal.state == sid
        assert len(bundle.states) == before

    def test_unrelated_becomes_new_state_in_permissive_mode(self, table, filters):
        bundle = DomainBundle()
        bundle.intern_state(StateTriple("max", "has", "money"), StateKind.BINARY)
        out = unify_condition(StateTriple("max", "ride", "dragon"), bundle,
                              table, 0.8, filters)
        assert out.created == "max_ride_dragon"
        assert out.literal is not None

    def test_unrelated_becomes_proposal_in_strict_mode(self, table, filters):
        bundle = DomainBundle()
        bundle.intern_state(StateTriple("max", "has", "money"), StateKind.BINARY)
        before = bundle.to_dict()
        out = unify_condition(StateTriple("max", "ride", "dragon"), bundle,
                              table, 0.8, filters, strict=True)
        assert out.literal is None
        assert out.proposal == StateTriple("max", "ride", "dragon")
        assert bundle.to_dict() == before

    def test_threshold_above_one_never_matches_existing(self, table, filters):
        bundle = DomainBundle()
        bundle.intern_state(StateTriple("max", "has", "money"), StateKind.BINARY)
        out = unify_condition(StateTriple("max", "own", "cash"), bundle,
                              table, 1.01, filters, strict=True)
        assert out.literal is None and out.proposal is not None

    def test_fluent_value_unification(self, table, filters):
        bundle = DomainBundle()
        bundle.intern_state(StateTriple("max", "go", "restaurant"),
                            StateKind.FLUENT)
        bundle.intern_state(StateTriple("max", "go", "park"), StateKind.FLUENT)
        out = unify_condition(StateTriple("max", "go", "park"), bundle,
                              table, 0.75, filters)
        assert out.literal is not None
        assert out.literal.state == "max_go" and out.literal.value == "park"


class TestDetectProbability:
    def test_possibly(self):
        keywords = load_probability_keywords()
        assert detect_probability("he possibly feels more knowledgeable",
                                  keywords) == 0.5

    def test_no_keyword_is_deterministic(self):
        keywords = load_probability_keywords()
        assert detect_probability("he feels more knowledgeable", keywords) == 1.0

    def test_definitely(self):
        keywords = load_probability_keywords()
        assert detect_probability("he definitely feels better", keywords) == 1.0

    def test_position_independent(self):
        keywords = load_probability_keywords()
        a = detect_probability("possibly he feels tired", keywords)
        b = detect_probability("he feels tired possibly", keywords)
        assert a == b == 0.5

    def test_always_in_unit_interval(self):
        keywords = load_probability_keywords()
        segments = ["he probably sleeps", "he rarely sings", "nothing here",
                    "definitely maybe"]
        for s in segments:
            assert 0.0 < detect_probability(s, keywords) <= 1.0


class TestBuildAffordanceEndToEnd:
    def test_worked_example(self, pipeline):
        bundle = pipeline.new_bundle()
        bundle, report = pipeline.process_text(bundle, AFFORDANCE_SENTENCE)
        assert report.outcomes[0].status == "ok"
        aff = bundle.affordances[0]
        assert aff.name == "go_to_library" and aff.owner == "max"
        assert len(aff.preconditions.literals()) == 1
        assert len(aff.postconditions) == 1
        assert aff.postconditions[0].probability == 1.0
        assert bundle.validate() == []

    def test_possibly_variant_is_probabilistic(self, pipeline):
        bundle = pipeline.new_bundle()
        sentence = AFFORDANCE_SENTENCE.replace("he feels", "he possibly feels")
        bundle, report = pipeline.process_text(bundle, sentence)
        aff = bundle.affordances[0]
        assert aff.postconditions[0].probability == 0.5
        assert any("non-deterministic" in d
                   for d in report.outcomes[0].diagnostics)

    def test_pre_only_draft_flagged_for_feedback(self, pipeline):
        bundle = pipeline.new_bundle()
        bundle, report = pipeline.process_text(
            bundle, "Max sleeps only if he is tired.")
        aff = bundle.affordances[0]
        assert aff.postconditions == ()
        assert any(s.kind == "incomplete-affordance"
                   for s in report.suggestions)

    def test_duplicate_owner_name_is_an_error(self, pipeline):
        bundle = pipeline.new_bundle()
        bundle, _ = pipeline.process_text(bundle, AFFORDANCE_SENTENCE)
        bundle, report = pipeline.process_text(bundle, AFFORDANCE_SENTENCE)
        assert report.outcomes[0].status == "error"
        assert "already exists" in report.outcomes[0].error
