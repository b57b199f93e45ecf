"""Three-valued evaluation and bounded consequence, equivalence and consistency checks.

Truth values are ordered F < B < T. Conjunction and universal quantification
take the minimum, disjunction and existential quantification the maximum,
negation swaps t and f and fixes b, and A -> B is the value of B when A is
designated and t otherwise. ``eval_formula_clauses`` spells the same
interpretation out case by case; the two must always agree.

Searches enumerate the domains {d1}, {d1, d2}, ... and, per domain, every
interpretation of the occurring symbols in canonical order (symbols sorted,
cells in ``itertools.product`` order, values in the order t, f, b), then every
assignment of the free variables. The first witness found is returned.
"""
import itertools
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from config import get_config
from errors import EvaluationError
from models import (
    CLASSICAL_VALUES,
    TRUTH_VALUES,
    And,
    Assignment,
    CounterModel,
    Eq,
    Exists,
    Falsum,
    Forall,
    Formula,
    Imp,
    Inconclusive,
    NoCounterModelUpTo,
    Not,
    Or,
    PredApp,
    Signature,
    Structure,
    Term,
    TruthValue,
    Var,
    Verdict,
    identity_equality,
)
from services.syntax import free_vars, is_propositional, occurring_signature, occurs_equality
from utils import setup_logger

logger = setup_logger(__name__)

T, F, B = TruthValue.T, TruthValue.F, TruthValue.B

EQUALITY_POLICIES = ("identity", "free")


def designated(v: TruthValue) -> bool:
    return v is not F


def neg(v: TruthValue) -> TruthValue:
    return {T: F, F: T, B: B}[v]


def conj(v: TruthValue, w: TruthValue) -> TruthValue:
    return v if v.rank <= w.rank else w


def disj(v: TruthValue, w: TruthValue) -> TruthValue:
    return v if v.rank >= w.rank else w


def impl(v: TruthValue, w: TruthValue) -> TruthValue:
    return w if designated(v) else T


NEG = {v: neg(v) for v in TRUTH_VALUES}
CONJ = {(v, w): conj(v, w) for v, w in itertools.product(TRUTH_VALUES, repeat=2)}
DISJ = {(v, w): disj(v, w) for v, w in itertools.product(TRUTH_VALUES, repeat=2)}
IMPL = {(v, w): impl(v, w) for v, w in itertools.product(TRUTH_VALUES, repeat=2)}


def eval_term(t: Term, s: Structure, a: Assignment) -> str:
    if isinstance(t, Var):
        try:
            return a[t.name]
        except KeyError:
            raise EvaluationError(f"variable '{t.name}' is not assigned") from None
    table = s.functions.get(t.function)
    if table is None:
        raise EvaluationError(f"function symbol '{t.function}' is not interpreted")
    args = tuple(eval_term(arg, s, a) for arg in t.args)
    try:
        return table[args]
    except KeyError:
        raise EvaluationError(f"function '{t.function}' has no entry for {args}") from None


def _eval_atom(A: Formula, s: Structure, a: Assignment) -> TruthValue:
    if isinstance(A, PredApp):
        table = s.predicates.get(A.predicate)
        if table is None:
            raise EvaluationError(f"predicate symbol '{A.predicate}' is not interpreted")
        args = tuple(eval_term(t, s, a) for t in A.args)
        try:
            return table[args]
        except KeyError:
            raise EvaluationError(f"predicate '{A.predicate}' has no entry for {args}") from None
    return s.equality[(eval_term(A.left, s, a), eval_term(A.right, s, a))]


def eval_formula(A: Formula, s: Structure, a: Assignment) -> TruthValue:
    if isinstance(A, Falsum):
        return F
    if isinstance(A, (PredApp, Eq)):
        return _eval_atom(A, s, a)
    if isinstance(A, Not):
        return NEG[eval_formula(A.body, s, a)]
    if isinstance(A, And):
        left = eval_formula(A.left, s, a)
        if left is F:
            return F
        return conj(left, eval_formula(A.right, s, a))
    if isinstance(A, Or):
        left = eval_formula(A.left, s, a)
        if left is T:
            return T
        return disj(left, eval_formula(A.right, s, a))
    if isinstance(A, Imp):
        if not designated(eval_formula(A.left, s, a)):
            return T
        return eval_formula(A.right, s, a)
    if isinstance(A, Forall):
        value = T
        for d in s.domain:
            value = conj(value, eval_formula(A.body, s, {**a, A.var: d}))
            if value is F:
                break
        return value
    if isinstance(A, Exists):
        value = F
        for d in s.domain:
            value = disj(value, eval_formula(A.body, s, {**a, A.var: d}))
            if value is T:
                break
        return value
    raise EvaluationError(f"not a formula: {A!r}")


def eval_formula_clauses(A: Formula, s: Structure, a: Assignment) -> TruthValue:
    """Case-by-case reading of the interpretation: t if the truth condition holds,
    f if the falsehood condition holds, b otherwise."""
    if isinstance(A, Falsum):
        return F
    if isinstance(A, (PredApp, Eq)):
        return _eval_atom(A, s, a)
    if isinstance(A, Not):
        v = eval_formula_clauses(A.body, s, a)
        return T if v is F else F if v is T else B
    if isinstance(A, (Forall, Exists)):
        values = [eval_formula_clauses(A.body, s, {**a, A.var: d}) for d in s.domain]
        if isinstance(A, Forall):
            if all(v is T for v in values):
                return T
            return F if any(v is F for v in values) else B
        if any(v is T for v in values):
            return T
        return F if all(v is F for v in values) else B
    v = eval_formula_clauses(A.left, s, a)
    w = eval_formula_clauses(A.right, s, a)
    if isinstance(A, And):
        if v is T and w is T:
            return T
        return F if v is F or w is F else B
    if isinstance(A, Or):
        if v is T or w is T:
            return T
        return F if v is F and w is F else B
    if v is F or w is T:
        return T
    return F if w is F else B


def holds(A: Formula, s: Structure, a: Assignment) -> bool:
    return designated(eval_formula(A, s, a))


def is_classical(s: Structure) -> bool:
    return all(v is not B for v in s.cells())


# Enumeration


def canonical_domain(size: int) -> Tuple[str, ...]:
    return tuple(f"d{i}" for i in range(1, size + 1))


def _cell_choices(
    sig: Signature, domain: Tuple[str, ...], classical: bool, equality: str, with_equality: bool
) -> List[Tuple[str, Tuple, Sequence]]:
    """(kind, key, options) for every free cell in canonical order."""
    if equality not in EQUALITY_POLICIES:
        raise ValueError(f"unknown equality policy '{equality}' (expected one of {EQUALITY_POLICIES})")
    values = CLASSICAL_VALUES if classical else TRUTH_VALUES
    cells: List[Tuple[str, Tuple, Sequence]] = []
    for name in sorted(sig.functions):
        for args in itertools.product(domain, repeat=sig.functions[name]):
            cells.append(("fun", (name, args), domain))
    for name in sorted(sig.predicates):
        for args in itertools.product(domain, repeat=sig.predicates[name]):
            cells.append(("pred", (name, args), values))
    for d, e in itertools.product(domain, repeat=2):
        if not with_equality:
            options: Sequence = (T,) if d == e else (F,)
        elif d == e:
            options = (T,) if classical else (T, B)
        elif equality == "identity":
            options = (F,)
        else:
            options = values
        cells.append(("eq", (d, e), options))
    return cells


def count_structures(
    sig: Signature, size: int, classical: bool = False, equality: str = "identity", with_equality: bool = True
) -> int:
    count = 1
    for _, _, options in _cell_choices(sig, canonical_domain(size), classical, equality, with_equality):
        count *= len(options)
    return count


def enumerate_structures(
    sig: Signature,
    size: int,
    classical: bool = False,
    equality: str = "identity",
    with_equality: bool = True,
) -> Iterator[Structure]:
    """Every structure over sig with domain d1..d<size>, in canonical order.

    The equality diagonal only ranges over designated values. With
    ``with_equality=False`` equality is fixed to the identity relation.
    """
    domain = canonical_domain(size)
    cells = _cell_choices(sig, domain, classical, equality, with_equality)
    for choice in itertools.product(*(options for _, _, options in cells)):
        functions: Dict[str, Dict[Tuple[str, ...], str]] = {name: {} for name in sig.functions}
        predicates: Dict[str, Dict[Tuple[str, ...], TruthValue]] = {name: {} for name in sig.predicates}
        eq: Dict[Tuple[str, str], TruthValue] = {}
        for (kind, key, _), value in zip(cells, choice):
            if kind == "fun":
                functions[key[0]][key[1]] = value
            elif kind == "pred":
                predicates[key[0]][key[1]] = value
            else:
                eq[key] = value
        yield Structure(domain, functions, predicates, eq)


def enumerate_assignments(variables: Sequence[str], domain: Sequence[str]) -> Iterator[Assignment]:
    for values in itertools.product(domain, repeat=len(variables)):
        yield dict(zip(variables, values))


# Bounded searches

Witness = Callable[[Tuple[TruthValue, ...]], bool]


def search(
    formulas: Sequence[Formula],
    witness: Witness,
    max_domain: Optional[int] = None,
    budget: Optional[int] = None,
    classical: bool = False,
    equality: Optional[str] = None,
    label: str = "SEARCH",
) -> Verdict:
    """First (structure, assignment) in canonical order whose formula values satisfy witness.

    The budget caps the number of (structure, assignment) points; a domain size
    whose points would exceed it is not started and the result is Inconclusive.
    """
    settings = get_config()
    max_domain = settings.MAX_DOMAIN if max_domain is None else max_domain
    budget = settings.SEARCH_BUDGET if budget is None else budget
    equality = equality or settings.EQUALITY
    if max_domain < 1:
        raise ValueError("max_domain must be at least 1")
    if budget < 1:
        raise ValueError("budget must be at least 1")

    sig = occurring_signature(formulas)
    variables = sorted(free_vars(formulas))
    with_equality = occurs_equality(formulas)
    # Propositional queries do not depend on the domain.
    sizes = 1 if all(is_propositional(f) for f in formulas) else max_domain

    spent = 0
    for size in range(1, sizes + 1):
        points = count_structures(sig, size, classical, equality, with_equality) * size ** len(variables)
        if spent + points > budget:
            logger.warning(
                f"{label}_INCONCLUSIVE: domain size {size} needs {points} points, "
                f"{budget - spent} of {budget} left"
            )
            return Inconclusive(size - 1, budget)
        spent += points
        logger.debug(f"{label}: searching domain size {size} ({points} points)")
        for s in enumerate_structures(sig, size, classical, equality, with_equality):
            for a in enumerate_assignments(variables, s.domain):
                values = tuple(eval_formula(f, s, a) for f in formulas)
                if witness(values):
                    logger.info(f"{label}_WITNESS: found at domain size {size} after {spent} points budgeted")
                    return CounterModel(s, tuple(sorted(a.items())), values)
    logger.info(f"{label}_PASS: no witness up to domain size {max_domain}")
    return NoCounterModelUpTo(max_domain)


def check_consequence(
    gamma: Iterable[Formula],
    A: Formula,
    max_domain: Optional[int] = None,
    budget: Optional[int] = None,
    classical: bool = False,
    equality: Optional[str] = None,
) -> Verdict:
    """Look for a point where every member of gamma holds and A does not.

    ``classical=True`` restricts the search to two-valued structures.
    """
    premises = list(gamma)
    formulas = premises + [A]

    def refutes(values: Tuple[TruthValue, ...]) -> bool:
        return all(designated(v) for v in values[:-1]) and not designated(values[-1])

    return search(formulas, refutes, max_domain, budget, classical, equality, label="CONSEQUENCE")


def check_equivalence(
    A1: Formula,
    A2: Formula,
    max_domain: Optional[int] = None,
    budget: Optional[int] = None,
    classical: bool = False,
    equality: Optional[str] = None,
) -> Verdict:
    return search([A1, A2], lambda v: v[0] is not v[1], max_domain, budget, classical, equality, label="EQUIVALENCE")


def check_consistency(
    A: Formula,
    max_domain: Optional[int] = None,
    budget: Optional[int] = None,
    equality: Optional[str] = None,
) -> Verdict:
    """A witness is a point where A evaluates to b."""
    return search([A], lambda v: v[0] is B, max_domain, budget, False, equality, label="CONSISTENCY")


def recheck(verdict: CounterModel, formulas: Sequence[Formula]) -> Tuple[TruthValue, ...]:
    """Re-evaluate formulas at a witness point."""
    return tuple(eval_formula(f, verdict.structure, verdict.assignment_map) for f in formulas)


def identity_structure(domain: Tuple[str, ...], functions=None, predicates=None) -> Structure:
    return Structure(domain, functions or {}, predicates or {}, identity_equality(domain))
