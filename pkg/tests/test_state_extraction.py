import pytest

from nl2domain.domain_model import DomainBundle, StateKind, StateTriple
from nl2domain.ingestion import builtin_parse, classify_state_kind
from nl2domain.state_extraction import (
    MissingSubjectError,
    build_state_decls,
    extract_triples,
    load_rules,
)

from conftest import FIG4_SENTENCE, TABLE1_SENTENCES

KEYWORDS = ["such as", "including", "consist of", "consists of"]

# the extracted-state column of the bundled five-sentence corpus
TABLE1_EXPECTED = [
    [("max", "go", "restaurant"), ("max", "go", "park")],
    [("max", "engage_in", "ride_horse")],
    [("max", "be_aware", "surrounding")],
    [("max", "stand", "station")],
    [("max", "drink", "juice")],
]


@pytest.fixture(scope="module")
def rules():
    return load_rules()


def triples_of(sentence: str, rules) -> list[tuple[str, str, str]]:
    graph = builtin_parse(sentence)
    kind = classify_state_kind(graph, KEYWORDS)
    return [(t.subject, t.predicate, t.complement)
            for t in extract_triples(graph, kind, rules, KEYWORDS)]


class TestGoldenExtraction:
    def test_five_sentence_corpus_matches_exactly(self, rules):
        for sentence, expected in zip(TABLE1_SENTENCES, TABLE1_EXPECTED):
            assert triples_of(sentence, rules) == expected, sentence

    def test_open_clausal_complement_chain(self, rules):
        assert triples_of(FIG4_SENTENCE, rules) == [
            ("max", "try_out", "racing"), ("max", "try_out", "climbing")]

    def test_desire_chain_direct_object(self, rules):
        assert triples_of("Max would like to drink some juice.", rules) == \
            [("max", "drink", "juice")]

    def test_extraction_is_deterministic(self, rules):
        for _ in range(3):
            assert triples_of(FIG4_SENTENCE, rules) == [
                ("max", "try_out", "racing"), ("max", "try_out", "climbing")]

    def test_fanout_matches_conjunct_count(self, rules):
        triples = triples_of(
            "The menu consists of pasta, pizza and salad.", rules)
        assert len(triples) == 3
        assert {t[2] for t in triples} == {"pasta", "pizza", "salad"}

    def test_missing_subject_is_an_error(self, rules):
        graph = builtin_parse("Max can stand at the bus station.")
        # strip the subject's deprel by rebuilding a graph without it
        from dataclasses import replace
        from nl2domain.ingestion.graphs import SentenceGraph
        tokens = tuple(replace(t, deprel="dep") if t.deprel == "nsubj" else t
                       for t in graph.tokens)
        broken = SentenceGraph(tokens, source=graph.source)
        with pytest.raises(MissingSubjectError):
            extract_triples(broken, StateKind.BINARY, rules, KEYWORDS)

    def test_unmatched_sentence_yields_empty_list(self, rules):
        graph = builtin_parse("Max sleeps")
        assert extract_triples(graph, StateKind.BINARY, rules, KEYWORDS) == []

    def test_complement_reachable_from_main_verb(self, rules):
        # structural property: every complement token's head chain passes
        # through the main content verb
        from nl2domain.state_extraction import locate_main_verb
        for sentence in TABLE1_SENTENCES + [FIG4_SENTENCE]:
            graph = builtin_parse(sentence)
            kind = classify_state_kind(graph, KEYWORDS)
            triples = extract_triples(graph, kind, rules, KEYWORDS)
            main = locate_main_verb(graph)
            reachable = {t.index for t in graph.subtree(main.index)}
            for triple in triples:
                last = triple.complement.split("_")[-1]
                matching = [t for t in graph.tokens
                            if t.lemma == last or t.text.lower().startswith(last)]
                assert any(t.index in reachable for t in matching), triple


class TestBuildStateDecls:
    def test_fluent_grouping(self, rules):
        bundle = DomainBundle()
        graph = builtin_parse(TABLE1_SENTENCES[0])
        triples = extract_triples(graph, StateKind.FLUENT, rules, KEYWORDS)
        ids = build_state_decls(triples, StateKind.FLUENT, bundle)
        assert ids == ["max_go", "max_go"]
        assert bundle.states["max_go"].values == ("restaurant", "park")

    def test_single_binary_triple(self, rules):
        bundle = DomainBundle()
        ids = build_state_decls([StateTriple("max", "drink", "juice")],
                                StateKind.BINARY, bundle)
        assert ids == ["max_drink_juice"]

    def test_resubmission_is_idempotent(self, rules):
        bundle = DomainBundle()
        triples = [StateTriple("max", "go", "restaurant"),
                   StateTriple("max", "go", "park")]
        build_state_decls(triples, StateKind.FLUENT, bundle)
        snapshot = bundle.to_dict()
        build_state_decls(triples, StateKind.FLUENT, bundle)
        assert bundle.to_dict() == snapshot

    def test_lone_fluent_triple_becomes_binary_fact(self, rules):
        bundle = DomainBundle()
        ids = build_state_decls([StateTriple("max", "engage_in", "ride_horse")],
                                StateKind.FLUENT, bundle)
        assert bundle.states[ids[0]].kind is StateKind.BINARY

    def test_lone_fluent_triple_extends_existing_fluent(self, rules):
        bundle = DomainBundle()
        build_state_decls([StateTriple("max", "go", "restaurant"),
                           StateTriple("max", "go", "park")],
                          StateKind.FLUENT, bundle)
        ids = build_state_decls([StateTriple("max", "go", "beach")],
                                StateKind.FLUENT, bundle)
        assert ids == ["max_go"]
        assert bundle.states["max_go"].values == ("restaurant", "park", "beach")
