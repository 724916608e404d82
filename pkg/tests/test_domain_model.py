import itertools
import random

import pytest

from nl2domain.domain_model import (
    Cnf,
    DomainBundle,
    DomainError,
    Literal,
    PostCondition,
    StateKind,
    StateTriple,
    eval_cnf,
    slugify,
    validate_bundle,
)
from nl2domain.domain_model import Affordance


class TestSlugify:
    def test_plural_noun(self):
        assert slugify("restaurants") == "restaurant"

    def test_idempotent_on_singular(self):
        assert slugify("restaurant") == "restaurant"

    def test_articles_dropped_and_singularized(self):
        assert slugify("Ride a Horse") == "ride_horse"

    def test_idempotence_property(self):
        samples = ["restaurants", "Ride a Horse", "bus station", "his exams",
                   "places such", "activities", "surroundings", "try out",
                   "guide a blind person", "have guitar in hands"]
        for s in samples:
            once = slugify(s)
            assert slugify(once) == once

    def test_kept_final_s(self):
        assert slugify("has") == "has"

    def test_empty_phrase_rejected(self):
        with pytest.raises(DomainError):
            slugify("   ")


class TestInternState:
    def test_sequential_fluent_grouping(self):
        bundle = DomainBundle()
        a = bundle.intern_state(StateTriple("max", "go", "restaurant"),
                                StateKind.FLUENT)
        b = bundle.intern_state(StateTriple("max", "go", "park"),
                                StateKind.FLUENT)
        assert a == b == "max_go"
        decl = bundle.states["max_go"]
        assert decl.kind is StateKind.FLUENT
        assert decl.values == ("restaurant", "park")

    def test_binary_interning_is_idempotent(self):
        bundle = DomainBundle()
        first = bundle.intern_state(StateTriple("max", "drink", "juice"),
                                    StateKind.BINARY)
        snapshot = bundle.to_dict()
        second = bundle.intern_state(StateTriple("max", "drink", "juice"),
                                     StateKind.BINARY)
        assert first == second
        assert bundle.to_dict() == snapshot

    def test_new_binary_state(self):
        bundle = DomainBundle()
        sid = bundle.intern_state(StateTriple("max", "drink", "juice"),
                                  StateKind.BINARY)
        assert sid == "max_drink_juice"
        assert bundle.states[sid].triple == StateTriple("max", "drink", "juice")

    def test_kind_conflict_names_both_declarations(self):
        bundle = DomainBundle()
        bundle.intern_state(StateTriple("max", "go", "restaurant"),
                            StateKind.FLUENT)
        with pytest.raises(DomainError) as exc:
            bundle.intern_state(StateTriple("max", "go", "beach"),
                                StateKind.BINARY)
        assert "max_go" in str(exc.value)
        assert "beach" in str(exc.value)

    def test_interning_commutes_over_permutations(self):
        triples = [
            (StateTriple("max", "go", "restaurant"), StateKind.FLUENT),
            (StateTriple("max", "go", "park"), StateKind.FLUENT),
            (StateTriple("max", "drink", "juice"), StateKind.BINARY),
            (StateTriple("max", "drink", "juice"), StateKind.BINARY),
        ]
        outcomes = set()
        for perm in itertools.permutations(triples):
            bundle = DomainBundle()
            for triple, kind in perm:
                bundle.intern_state(triple, kind)
            outcomes.add(str(sorted(bundle.states)))
        assert len(outcomes) == 1


def brute_force_cnf(cnf: Cnf, assignment) -> bool:
    # independent oracle: naive clause-by-clause truth evaluation
    for clause in cnf.clauses:
        clause_value = False
        for lit in clause:
            actual = assignment[lit.state]
            if lit.value is None:
                value = bool(actual)
            else:
                value = actual == lit.value
            if value == lit.polarity:
                clause_value = True
        if not clause_value:
            return False
    return True


class TestEvalCnf:
    def test_empty_cnf_is_true(self):
        assert eval_cnf(Cnf(), {}) is True

    def test_single_false_literal(self):
        cnf = Cnf(((Literal("x"),),))
        assert eval_cnf(cnf, {"x": False}) is False

    def test_unassigned_state_is_an_error(self):
        cnf = Cnf(((Literal("x"),),))
        with pytest.raises(DomainError):
            eval_cnf(cnf, {})

    def test_matches_truth_table_oracle_on_random_cnfs(self):
        rng = random.Random(20240811)
        states = ["s0", "s1", "s2"]
        for _ in range(100):
            clauses = []
            for _ in range(rng.randint(1, 4)):
                clause = tuple(
                    Literal(rng.choice(states), polarity=rng.random() < 0.5)
                    for _ in range(rng.randint(1, 3)))
                clauses.append(clause)
            cnf = Cnf(tuple(clauses))
            for bits in itertools.product([False, True], repeat=len(states)):
                assignment = dict(zip(states, bits))
                assert eval_cnf(cnf, assignment) == brute_force_cnf(cnf, assignment)

    def test_exhaustive_up_to_four_states(self):
        rng = random.Random(77)
        states = ["a", "b", "c", "d"]
        for _ in range(25):
            clauses = tuple(
                tuple(Literal(rng.choice(states), polarity=rng.random() < 0.5)
                      for _ in range(rng.randint(1, 4)))
                for _ in range(rng.randint(1, 5)))
            cnf = Cnf(clauses)
            for bits in itertools.product([False, True], repeat=4):
                assignment = dict(zip(states, bits))
                assert eval_cnf(cnf, assignment) == brute_force_cnf(cnf, assignment)

    def test_empty_clause_rejected(self):
        with pytest.raises(DomainError):
            Cnf(((),))


class TestValidateBundle:
    def test_empty_bundle_is_valid(self):
        assert validate_bundle(DomainBundle()) == []

    def test_dangling_state_reference(self):
        bundle = DomainBundle()
        bundle.add_object("max")
        bundle.affordances.append(Affordance(
            name="walk", owner="max",
            preconditions=Cnf(((Literal("max_missing"),),))))
        codes = [d.code for d in validate_bundle(bundle)]
        assert codes == ["dangling-state"]

    def test_zero_probability_is_flagged(self):
        bundle = DomainBundle()
        sid = bundle.intern_state(StateTriple("max", "drink", "juice"),
                                  StateKind.BINARY)
        bundle.affordances.append(Affordance(
            name="drink", owner="max",
            postconditions=(PostCondition(Literal(sid), probability=0.0),)))
        codes = [d.code for d in validate_bundle(bundle)]
        assert "bad-probability" in codes

    def test_constructed_bundles_validate_clean(self):
        bundle = DomainBundle()
        bundle.intern_state(StateTriple("max", "go", "park"), StateKind.FLUENT)
        bundle.intern_state(StateTriple("max", "go", "beach"), StateKind.FLUENT)
        bundle.intern_state(StateTriple("max", "drink", "juice"), StateKind.BINARY)
        assert validate_bundle(bundle) == []

    def test_single_value_fluent_is_flagged(self):
        bundle = DomainBundle()
        bundle.intern_state(StateTriple("max", "go", "park"), StateKind.FLUENT)
        codes = [d.code for d in validate_bundle(bundle)]
        assert codes == ["fluent-domain-size"]


class TestCanonicalSerialization:
    def test_round_trip(self):
        bundle = DomainBundle()
        bundle.add_object("max", "dog")
        bundle.intern_state(StateTriple("max", "go", "park"), StateKind.FLUENT)
        bundle.intern_state(StateTriple("max", "go", "beach"), StateKind.FLUENT)
        text = bundle.to_canonical_text()
        again = DomainBundle.from_canonical_text(text)
        assert again.structurally_equal(bundle)
        assert again.to_canonical_text() == text

    def test_key_sorted_and_stable(self):
        bundle = DomainBundle()
        bundle.add_object("zeta")
        bundle.add_object("alpha")
        text = bundle.to_canonical_text()
        assert text.index('"alpha"') < text.index('"zeta"')
        assert bundle.to_canonical_text() == text
