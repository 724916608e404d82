import pytest

from nl2domain.domain_model import StateKind
from nl2domain.ingestion import (
    ConlluError,
    GraphError,
    ParseError,
    SentenceGraph,
    Token,
    builtin_parse,
    classify_state_kind,
    parse_conllu,
    resolve_coreferences,
    serialize_conllu,
    simplify,
    split_text,
)

from conftest import COREF_SENTENCE, FIG4_SENTENCE

FLUENT_KEYWORDS = ["such as", "including", "consist of", "consists of"]


def edge_set(graph: SentenceGraph) -> set[tuple[str, str, str]]:
    out = set()
    for t in graph.tokens:
        head = graph.token(t.head).text if t.head else "ROOT"
        out.add((head, t.deprel, t.text))
    return out


# ---------------------------------------------------------------------------
# CoNLL-U
# ---------------------------------------------------------------------------

TWO_SENTENCES = """\
# text = Max sleeps.
1\tMax\tMax\tPROPN\t_\t_\t2\tnsubj\t_\t_
2\tsleeps\tsleep\tVERB\t_\t_\t0\troot\t_\t_
3\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_

# text = Max eats.
1\tMax\tMax\tPROPN\t_\t_\t2\tnsubj\t_\t_
2\teats\teat\tVERB\t_\t_\t0\troot\t_\t_
3\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_
"""

# the open-clausal-complement sentence with the edge labels a UD parser emits
FIG4_CONLLU = """\
# text = Max would like to try out different activities such as racing and climbing
1\tMax\tMax\tPROPN\t_\t_\t3\tnsubj\t_\t_
2\twould\twould\tAUX\t_\t_\t3\taux\t_\t_
3\tlike\tlike\tVERB\t_\t_\t0\troot\t_\t_
4\tto\tto\tPART\t_\t_\t5\taux\t_\t_
5\ttry\ttry\tVERB\t_\t_\t3\txcomp\t_\t_
6\tout\tout\tADP\t_\t_\t5\tprt\t_\t_
7\tdifferent\tdifferent\tADJ\t_\t_\t8\tamod\t_\t_
8\tactivities\tactivity\tNOUN\t_\t_\t5\tdobj\t_\t_
9\tsuch\tsuch\tADJ\t_\t_\t10\tamod\t_\t_
10\tas\tas\tADP\t_\t_\t8\tprep\t_\t_
11\tracing\tracing\tNOUN\t_\t_\t10\tpobj\t_\t_
12\tand\tand\tCCONJ\t_\t_\t11\tcc\t_\t_
13\tclimbing\tclimbing\tNOUN\t_\t_\t11\tconj\t_\t_
"""


class TestParseConllu:
    def test_two_sentence_file(self):
        graphs = parse_conllu(TWO_SENTENCES)
        assert len(graphs) == 2
        for g in graphs:
            assert sum(1 for t in g.tokens if t.head == 0) == 1
        assert graphs[0].source == "Max sleeps."

    def test_self_heading_token_is_an_error_with_line(self):
        bad = "1\tMax\tMax\tPROPN\t_\t_\t1\tnsubj\t_\t_\n"
        with pytest.raises((ConlluError, GraphError)) as exc:
            parse_conllu(bad)
        assert "1" in str(exc.value)

    def test_cycle_is_an_error(self):
        bad = ("1\ta\ta\tNOUN\t_\t_\t2\tdep\t_\t_\n"
               "2\tb\tb\tNOUN\t_\t_\t1\tdep\t_\t_\n")
        with pytest.raises(ConlluError):
            parse_conllu(bad)

    def test_duplicate_id_is_an_error_with_line(self):
        bad = ("1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n"
               "1\tb\tb\tNOUN\t_\t_\t1\tdep\t_\t_\n")
        with pytest.raises(ConlluError) as exc:
            parse_conllu(bad)
        assert exc.value.line == 2

    def test_bad_column_count_is_an_error_with_line(self):
        with pytest.raises(ConlluError) as exc:
            parse_conllu("1\tMax\tMax\n")
        assert exc.value.line == 1

    def test_multiword_ranges_are_skipped(self):
        text = ("1-2\tdel\t_\t_\t_\t_\t_\t_\t_\t_\n"
                "1\tde\tde\tADP\t_\t_\t2\tcase\t_\t_\n"
                "2\tel\tel\tNOUN\t_\t_\t0\troot\t_\t_\n")
        graphs = parse_conllu(text)
        assert [t.text for t in graphs[0].tokens] == ["de", "el"]

    def test_fig4_edges_survive(self):
        graph = parse_conllu(FIG4_CONLLU)[0]
        edges = edge_set(graph)
        assert ("like", "nsubj", "Max") in edges
        assert ("like", "xcomp", "try") in edges
        assert ("try", "dobj", "activities") in edges
        assert ("activities", "prep", "as") in edges
        assert ("as", "pobj", "racing") in edges
        assert ("racing", "conj", "climbing") in edges

    def test_serialize_parse_round_trip(self):
        graphs = parse_conllu(TWO_SENTENCES)
        again = parse_conllu(serialize_conllu(graphs))
        assert [[(t.index, t.text, t.lemma, t.pos, t.head, t.deprel)
                 for t in g.tokens] for g in again] == \
               [[(t.index, t.text, t.lemma, t.pos, t.head, t.deprel)
                 for t in g.tokens] for g in graphs]


# ---------------------------------------------------------------------------
# Built-in parser
# ---------------------------------------------------------------------------

class TestBuiltinParse:
    def test_stand_at_the_bus_station(self):
        graph = builtin_parse("Max can stand at the bus station.")
        edges = edge_set(graph)
        assert ("stand", "prep", "at") in edges
        assert ("at", "pobj", "station") in edges
        assert ("station", "compound", "bus") in edges

    def test_such_as_coordination(self):
        graph = builtin_parse(
            "Max can go to different places such as restaurants and parks")
        edges = edge_set(graph)
        assert ("as", "pobj", "restaurants") in edges
        assert ("restaurants", "conj", "parks") in edges
        assert ("places", "prep", "as") in edges

    def test_gibberish_reports_nearest_template(self):
        with pytest.raises(ParseError) as exc:
            builtin_parse("florp glorp blip")
        assert "template" in str(exc.value).lower()

    def test_every_graph_is_a_tree(self):
        sentences = [
            "Max can stand at the bus station.",
            FIG4_SENTENCE,
            COREF_SENTENCE,
            "The menu consists of pasta, pizza and salad.",
        ]
        for s in sentences:
            graph = builtin_parse(s)
            assert sum(1 for t in graph.tokens if t.head == 0) == 1


# ---------------------------------------------------------------------------
# Co-reference
# ---------------------------------------------------------------------------

class TestResolveCoreferences:
    def test_he_resolves_to_max(self):
        graph = builtin_parse(COREF_SENTENCE)
        resolved, issues = resolve_coreferences([graph], ["max"])
        texts = [t.text for t in resolved[0].tokens]
        assert "he" not in texts
        assert texts.count("Max") == 2
        # "it" has no non-agent antecedent: flagged, left in place
        assert "it" in texts
        assert any(i.pronoun == "it" for i in issues)

    def test_pronoun_free_text_is_unchanged(self):
        graph = builtin_parse("Max can stand at the bus station.")
        resolved, issues = resolve_coreferences([graph], ["max"])
        assert resolved[0] == graph
        assert issues == []

    def test_possessive_resolves(self):
        graph = builtin_parse("Max can be aware of his surroundings.")
        resolved, _ = resolve_coreferences([graph], ["max"])
        texts = [t.text for t in resolved[0].tokens]
        assert "Max's" in texts
        assert "his" not in texts

    def test_token_count_is_preserved(self):
        graph = builtin_parse(COREF_SENTENCE)
        resolved, _ = resolve_coreferences([graph], ["max"])
        assert len(resolved[0].tokens) == len(graph.tokens)

    def test_it_resolves_to_registered_object(self):
        graph = builtin_parse("Max brings the book and then he reads it.")
        resolved, issues = resolve_coreferences(
            [graph], ["max", "book"], agents=["max"])
        texts = [t.text.lower() for t in resolved[0].tokens]
        assert "it" not in texts
        assert "book" in texts[-3:]

    def test_requires_entities(self):
        graph = builtin_parse("Max sleeps")
        with pytest.raises(ValueError):
            resolve_coreferences([graph], [])


# ---------------------------------------------------------------------------
# Simplification
# ---------------------------------------------------------------------------

def content_texts(graph: SentenceGraph) -> list[str]:
    return [t.text for t in graph.tokens if t.deprel not in {"cc", "punct"}]


class TestSimplify:
    def test_conjoined_clauses_split(self):
        graph = builtin_parse("Max brings the book and then Max reads it.")
        parts = simplify(graph)
        assert len(parts) == 2
        assert [p.root.text for p in parts] == ["brings", "reads"]

    def test_single_clause_is_identity(self):
        graph = builtin_parse("Max can stand at the bus station.")
        assert simplify(graph) == [graph]

    def test_three_way_conjunction(self):
        graph = builtin_parse("Max eats and Max drinks and Max sleeps")
        parts = simplify(graph)
        assert len(parts) == 3
        for p in parts:
            verbal_roots = [t for t in p.tokens if t.head == 0]
            assert len(verbal_roots) == 1
            assert verbal_roots[0].pos == "VERB"

    def test_shared_subject_is_copied(self):
        graph = builtin_parse("Max eats and drinks juice")
        parts = simplify(graph)
        assert len(parts) == 2
        for p in parts:
            assert any(t.deprel == "nsubj" for t in p.tokens)

    def test_content_tokens_preserved(self):
        graph = builtin_parse(COREF_SENTENCE)
        parts = simplify(graph)
        original = content_texts(graph)
        split_tokens = [t for p in parts for t in content_texts(p)]
        for token in original:
            assert token in split_tokens


# ---------------------------------------------------------------------------
# Classification and text splitting
# ---------------------------------------------------------------------------

class TestClassifyStateKind:
    def test_such_as_is_fluent(self):
        graph = builtin_parse(
            "Max can go to different places such as restaurants and parks")
        assert classify_state_kind(graph, FLUENT_KEYWORDS) is StateKind.FLUENT

    def test_preposition_sentence_is_binary(self):
        graph = builtin_parse("Max can stand at the bus station.")
        assert classify_state_kind(graph, FLUENT_KEYWORDS) is StateKind.BINARY

    def test_including_is_fluent(self):
        graph = builtin_parse(
            "Max can engage in different activities including riding a horse.")
        assert classify_state_kind(graph, FLUENT_KEYWORDS) is StateKind.FLUENT


class TestSplitText:
    def test_lines_and_periods(self):
        text = "Max sleeps. Max eats.\nMax drinks juice."
        assert split_text(text) == ["Max sleeps.", "Max eats.", "Max drinks juice."]

    def test_decimal_numbers_are_not_boundaries(self):
        text = "Max feels proud whenever he helps customers, which sets his honor to 0.9."
        assert len(split_text(text)) == 1

    def test_empty(self):
        assert split_text("  \n ") == []
