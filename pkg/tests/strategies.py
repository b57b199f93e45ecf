"""Hypothesis strategies for terms, formulas, structures and assignments."""
import itertools

from hypothesis import strategies as st

from models import (
    FALSUM,
    And,
    Apply,
    Eq,
    Exists,
    Forall,
    Imp,
    Not,
    Or,
    PredApp,
    Signature,
    Structure,
    TruthValue,
    Var,
)
from services.semantics import canonical_domain

VARIABLES = ("x", "y", "z")
PROPOSITIONS = (PredApp("p"), PredApp("q"), FALSUM)

# One constant, one unary and one binary function, one proposition, one unary and one binary predicate.
FIRST_ORDER_SIGNATURE = Signature(functions={"c": 0, "g": 1}, predicates={"p": 0, "P": 1, "R": 2})
# Small enough for exhaustive structure enumeration at domain size 2.
SMALL_SIGNATURE = Signature(functions={"c": 0}, predicates={"p": 0, "P": 1})


def _combine(children):
    binary = st.tuples(st.sampled_from([And, Or, Imp]), children, children).map(lambda t: t[0](t[1], t[2]))
    return st.one_of(children.map(Not), binary)


def propositional_formulas(max_leaves: int = 8):
    return st.recursive(st.sampled_from(PROPOSITIONS), _combine, max_leaves=max_leaves)


def terms(sig: Signature = FIRST_ORDER_SIGNATURE):
    leaves = st.one_of(
        st.sampled_from(VARIABLES).map(Var),
        st.sampled_from(sorted(n for n, k in sig.functions.items() if k == 0)).map(Apply),
    )
    unary = sorted(n for n, k in sig.functions.items() if k == 1)
    if not unary:
        return leaves
    return st.recursive(
        leaves,
        lambda inner: st.tuples(st.sampled_from(unary), inner).map(lambda t: Apply(t[0], (t[1],))),
        max_leaves=3,
    )


def atoms(sig: Signature = FIRST_ORDER_SIGNATURE):
    term = terms(sig)
    options = [st.just(FALSUM), st.tuples(term, term).map(lambda t: Eq(*t))]
    for name, arity in sorted(sig.predicates.items()):
        options.append(st.lists(term, min_size=arity, max_size=arity).map(lambda args, n=name: PredApp(n, tuple(args))))
    return st.one_of(options)


def first_order_formulas(sig: Signature = FIRST_ORDER_SIGNATURE, max_leaves: int = 6):
    def extend(children):
        quantified = st.tuples(st.sampled_from([Forall, Exists]), st.sampled_from(VARIABLES), children).map(
            lambda t: t[0](t[1], t[2])
        )
        return st.one_of(_combine(children), quantified)

    return st.recursive(atoms(sig), extend, max_leaves=max_leaves)


@st.composite
def structures(draw, sig: Signature = FIRST_ORDER_SIGNATURE, max_size: int = 3, classical: bool = False):
    size = draw(st.integers(min_value=1, max_value=max_size))
    domain = canonical_domain(size)
    values = [TruthValue.T, TruthValue.F] if classical else list(TruthValue)
    functions = {
        name: {args: draw(st.sampled_from(domain)) for args in itertools.product(domain, repeat=arity)}
        for name, arity in sorted(sig.functions.items())
    }
    predicates = {
        name: {args: draw(st.sampled_from(values)) for args in itertools.product(domain, repeat=arity)}
        for name, arity in sorted(sig.predicates.items())
    }
    diagonal = [TruthValue.T] if classical else [TruthValue.T, TruthValue.B]
    equality = {
        (d, e): draw(st.sampled_from(diagonal)) if d == e else TruthValue.F
        for d, e in itertools.product(domain, repeat=2)
    }
    return Structure(domain, functions, predicates, equality)


@st.composite
def points(draw, sig: Signature = FIRST_ORDER_SIGNATURE, max_size: int = 3, classical: bool = False):
    """A structure with an assignment of every variable in VARIABLES."""
    s = draw(structures(sig, max_size, classical))
    a = {x: draw(st.sampled_from(s.domain)) for x in VARIABLES}
    return s, a
