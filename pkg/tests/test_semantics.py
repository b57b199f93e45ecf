#!/usr/bin/env python3
"""
Tests for the three-valued evaluator and the bounded searches.
"""

import itertools
from unittest.mock import Mock, patch

import pytest
from hypothesis import given

from errors import EvaluationError, StructureError
from models import (
    FALSUM,
    TRUTH_VALUES,
    And,
    CounterModel,
    Eq,
    Exists,
    Forall,
    Imp,
    Inconclusive,
    NoCounterModelUpTo,
    Not,
    Or,
    PredApp,
    Signature,
    Structure,
    TruthValue,
    Var,
    identity_equality,
)
from services import semantics
from services.syntax import canonical, parse_formula
from strategies import first_order_formulas, points, propositional_formulas

T, F, B = TruthValue.T, TruthValue.F, TruthValue.B
p, q = PredApp("p"), PredApp("q")
x, y = Var("x"), Var("y")


def P(t):
    return PredApp("P", (t,))


def unary_structure(*values: TruthValue) -> Structure:
    domain = tuple(f"d{i}" for i in range(1, len(values) + 1))
    table = {(d,): v for d, v in zip(domain, values)}
    return Structure(domain, {}, {"P": table}, identity_equality(domain))


def propositional_structure(**values: TruthValue) -> Structure:
    return Structure(("d1",), {}, {name: {(): v} for name, v in values.items()}, identity_equality(("d1",)))


class TestTables:
    """The connective tables against their clause-by-clause definition."""

    def test_negation(self):
        """~ swaps t and f and fixes b."""
        assert [semantics.neg(v) for v in TRUTH_VALUES] == [F, T, B]

    @pytest.mark.parametrize("v,w", list(itertools.product(TRUTH_VALUES, repeat=2)))
    def test_binary_cells(self, v, w):
        """Every conjunction, disjunction and implication cell."""
        expected_and = T if v is T and w is T else F if F in (v, w) else B
        expected_or = T if T in (v, w) else F if v is F and w is F else B
        expected_imp = T if v is F or w is T else F if w is F else B
        assert semantics.conj(v, w) is expected_and
        assert semantics.disj(v, w) is expected_or
        assert semantics.impl(v, w) is expected_imp

    @pytest.mark.parametrize("v,w", list(itertools.product(TRUTH_VALUES, repeat=2)))
    def test_designation_patterns(self, v, w):
        """Conjunction, disjunction and implication are designated exactly as classically."""
        d = semantics.designated
        assert d(semantics.conj(v, w)) == (d(v) and d(w))
        assert d(semantics.disj(v, w)) == (d(v) or d(w))
        assert d(semantics.impl(v, w)) == ((not d(v)) or d(w))

    @pytest.mark.parametrize("size", [1, 2, 3])
    def test_quantifiers_over_all_value_sets(self, size):
        """forall takes the minimum and exists the maximum of the instance values."""
        for values in itertools.product(TRUTH_VALUES, repeat=size):
            s = unary_structure(*values)
            ranks = sorted(values, key=lambda v: v.rank)
            assert semantics.eval_formula(Forall("x", P(x)), s, {}) is ranks[0]
            assert semantics.eval_formula(Exists("x", P(x)), s, {}) is ranks[-1]


class TestEvaluation:
    """eval_formula on concrete structures."""

    def test_falsum_is_false(self):
        """F is false in every structure."""
        assert semantics.eval_formula(FALSUM, unary_structure(B), {}) is F

    def test_glut_implication(self):
        """b -> f is f, b -> b is b."""
        s = propositional_structure(p=B, q=F)
        assert semantics.eval_formula(Imp(p, q), s, {}) is F
        assert semantics.eval_formula(Imp(p, p), s, {}) is B
        assert semantics.eval_formula(And(p, Not(p)), s, {}) is B

    def test_equality_uses_the_table(self):
        """An equation takes the value of its equality cell."""
        domain = ("d1", "d2")
        eq = identity_equality(domain)
        eq[("d1", "d1")] = B
        s = Structure(domain, {}, {}, eq)
        assert semantics.eval_formula(Eq(x, y), s, {"x": "d1", "y": "d1"}) is B
        assert semantics.eval_formula(Eq(x, y), s, {"x": "d1", "y": "d2"}) is F

    def test_unassigned_variable(self):
        """Evaluating an open formula without its variables fails."""
        with pytest.raises(EvaluationError, match="not assigned"):
            semantics.eval_formula(P(x), unary_structure(T), {})

    def test_uninterpreted_predicate(self):
        """A predicate missing from the structure fails."""
        with pytest.raises(EvaluationError, match="not interpreted"):
            semantics.eval_formula(q, propositional_structure(p=T), {})

    def test_classical_structure_detection(self):
        """A structure is classical when no cell holds b."""
        assert semantics.is_classical(unary_structure(T, F))
        assert not semantics.is_classical(unary_structure(T, B))

    @given(first_order_formulas(), points())
    def test_closed_forms_agree_with_clauses(self, formula, point):
        """The min/max evaluation equals the case-by-case definition."""
        s, a = point
        assert semantics.eval_formula(formula, s, a) is semantics.eval_formula_clauses(formula, s, a)

    @given(first_order_formulas(), points(classical=True))
    def test_classical_structures_give_classical_values(self, formula, point):
        """Without b in the structure, no formula evaluates to b."""
        s, a = point
        assert semantics.eval_formula(formula, s, a) is not B

    @given(first_order_formulas(), points())
    def test_invariant_under_renaming_bound_variables(self, formula, point):
        """Alpha-equivalent formulas have the same value."""
        s, a = point
        assert semantics.eval_formula(canonical(formula), s, a) is semantics.eval_formula(formula, s, a)


class TestStructures:
    """Validation and canonical enumeration."""

    def test_empty_domain(self):
        """The domain must be non-empty."""
        with pytest.raises(StructureError, match="non-empty"):
            Structure((), {}, {}, {})

    def test_false_diagonal(self):
        """Equality must be designated on the diagonal."""
        eq = identity_equality(("d1",))
        eq[("d1", "d1")] = F
        with pytest.raises(StructureError, match="diagonal"):
            Structure(("d1",), {}, {}, eq)

    def test_partial_table(self):
        """Tables must be total over the domain."""
        with pytest.raises(StructureError, match="not total"):
            Structure(("d1", "d2"), {}, {"P": {("d1",): T}}, identity_equality(("d1", "d2")))

    def test_count_matches_enumeration(self):
        """One unary predicate over two elements: 9 tables times 4 diagonals."""
        sig = Signature(predicates={"P": 1})
        structures = list(semantics.enumerate_structures(sig, 2))
        assert len(structures) == semantics.count_structures(sig, 2) == 36

    def test_free_equality_widens_the_space(self):
        """Off-diagonal equality cells take any value under the free policy."""
        sig = Signature(predicates={"P": 1})
        assert semantics.count_structures(sig, 2, equality="free") == 36 * 9

    def test_classical_enumeration(self):
        """Classical structures use t and f only, with a true diagonal."""
        sig = Signature(predicates={"P": 1})
        structures = list(semantics.enumerate_structures(sig, 2, classical=True))
        assert len(structures) == 4
        assert all(semantics.is_classical(s) for s in structures)

    def test_canonical_order(self):
        """Values run t, f, b with the first cell most significant."""
        sig = Signature(predicates={"p": 0, "q": 0})
        first, second = itertools.islice(semantics.enumerate_structures(sig, 1, with_equality=False), 2)
        assert (first.predicates["p"][()], first.predicates["q"][()]) == (T, T)
        assert (second.predicates["p"][()], second.predicates["q"][()]) == (T, F)

    def test_unknown_equality_policy(self):
        """Only the identity and free policies exist."""
        with pytest.raises(ValueError, match="equality policy"):
            list(semantics.enumerate_structures(Signature(), 1, equality="loose"))


class TestConsequence:
    """Bounded consequence, equivalence and consistency."""

    def test_contradiction_does_not_explode(self):
        """p, ~p does not entail q: p=b, q=f at domain size 1."""
        verdict = semantics.check_consequence([p, Not(p)], q)
        assert isinstance(verdict, CounterModel)
        assert verdict.structure.domain == ("d1",)
        assert verdict.structure.predicates["p"][()] is B
        assert verdict.structure.predicates["q"][()] is F
        assert verdict.values == (B, B, F)

    def test_excluded_middle_holds(self):
        """|- p \\/ ~p has no counter-model."""
        assert semantics.check_consequence([], Or(p, Not(p))) == NoCounterModelUpTo(3)

    def test_classical_consequence_explodes(self):
        """Restricted to classical structures, p, ~p entails q."""
        assert isinstance(semantics.check_consequence([p, Not(p)], q, classical=True), NoCounterModelUpTo)

    def test_modus_ponens_and_its_failure_for_negation(self):
        """p, p -> q entails q but p, ~p \\/ q does not (disjunctive syllogism fails)."""
        assert isinstance(semantics.check_consequence([p, Imp(p, q)], q), NoCounterModelUpTo)
        assert isinstance(semantics.check_consequence([p, Or(Not(p), q)], q), CounterModel)

    def test_first_order_counter_model(self):
        """exists x. P(x) does not entail forall x. P(x); the witness needs two elements."""
        verdict = semantics.check_consequence([Exists("x", P(x))], Forall("x", P(x)))
        assert isinstance(verdict, CounterModel)
        assert len(verdict.structure.domain) == 2
        assert semantics.recheck(verdict, [Exists("x", P(x)), Forall("x", P(x))]) == verdict.values

    def test_open_formulas_get_an_assignment(self):
        """Free variables are part of the witness."""
        verdict = semantics.check_consequence([P(x)], P(y))
        assert isinstance(verdict, CounterModel)
        assert set(verdict.assignment_map) == {"x", "y"}

    def test_substitution_of_equals_depends_on_the_equality_policy(self):
        """x = y, P(x) entails P(y) only while equality is the identity."""
        premises = [Eq(x, y), P(x)]
        assert isinstance(semantics.check_consequence(premises, P(y), equality="identity"), NoCounterModelUpTo)
        verdict = semantics.check_consequence(premises, P(y), equality="free")
        assert isinstance(verdict, CounterModel)
        a = verdict.assignment_map
        assert a["x"] != a["y"]

    def test_symmetry_of_equality_depends_on_the_equality_policy(self):
        """Under the free policy x = y can be designated while y = x is f."""
        assert isinstance(semantics.check_consequence([Eq(x, y)], Eq(y, x), equality="identity"), NoCounterModelUpTo)
        verdict = semantics.check_consequence([Eq(x, y)], Eq(y, x), equality="free")
        assert isinstance(verdict, CounterModel)
        a = verdict.assignment_map
        assert len(verdict.structure.domain) == 2
        assert semantics.designated(verdict.structure.equality[(a["x"], a["y"])])
        assert verdict.structure.equality[(a["y"], a["x"])] is F
        assert verdict.values[-1] is F

    def test_budget_exhaustion_is_inconclusive(self):
        """A domain size whose points exceed the budget is not started."""
        verdict = semantics.check_consequence([], Forall("x", P(x)), budget=2)
        assert verdict == Inconclusive(0, 2)

    def test_bad_bounds(self):
        """max_domain and budget must be positive."""
        with pytest.raises(ValueError):
            semantics.check_consequence([], p, max_domain=0)
        with pytest.raises(ValueError):
            semantics.check_consequence([], p, budget=0)

    def test_defaults_come_from_config(self):
        """Without explicit bounds the configured ones are used."""
        settings = Mock(MAX_DOMAIN=1, SEARCH_BUDGET=1000, EQUALITY="identity")
        with patch("services.semantics.get_config", return_value=settings):
            verdict = semantics.check_consequence([], Forall("x", P(x)))
        assert isinstance(verdict, CounterModel)
        assert verdict.structure.domain == ("d1",)

    def test_equivalence(self):
        """p is equivalent to ~~p, not to p \\/ q (p=f, q=t)."""
        assert isinstance(semantics.check_equivalence(p, Not(Not(p))), NoCounterModelUpTo)
        verdict = semantics.check_equivalence(p, Or(p, q))
        assert isinstance(verdict, CounterModel)
        assert verdict.values == (F, T)

    def test_consistency(self):
        """p can take b; F and p -> F never do."""
        assert isinstance(semantics.check_consistency(p), CounterModel)
        assert isinstance(semantics.check_consistency(FALSUM), NoCounterModelUpTo)
        assert isinstance(semantics.check_consistency(Imp(p, FALSUM)), NoCounterModelUpTo)

    @given(propositional_formulas())
    def test_lp_validity_implies_classical_validity(self, formula):
        """Every three-valued tautology is a classical one."""
        if isinstance(semantics.check_consequence([], formula), NoCounterModelUpTo):
            assert isinstance(semantics.check_consequence([], formula, classical=True), NoCounterModelUpTo)

    def test_parsed_queries(self):
        """The same checks work on parsed text."""
        sig = Signature(predicates={"P": 1})
        verdict = semantics.check_consequence(
            [parse_formula("forall x. P(x)", sig)], parse_formula("exists x. P(x)", sig)
        )
        assert verdict == NoCounterModelUpTo(3)
