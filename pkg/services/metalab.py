"""Exhaustive experiments on three-valued connectives and on the rule set.

The census ranges over connective tables that agree with classical logic on
{t, f}, whose designation pattern matches the classical one (a conjunction is
designated iff both sides are, and so on) and whose negation of b is
designated. Every cell forced to be non-designated is f, leaving two choices
(t or b) for each remaining cell: one negation cell, three conjunction cells,
five disjunction cells and four implication cells, 2 * 8 * 32 * 16 = 8192
tables in all. Quantifiers are folds of the conjunction and disjunction
tables over the instance values.
"""
import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from models import (
    FALSUM,
    TRUTH_VALUES,
    And,
    ConnectiveTable,
    CounterModel,
    Eq,
    Exists,
    Falsum,
    Forall,
    Formula,
    Iff,
    Imp,
    Inconclusive,
    Mode,
    NoCounterModelUpTo,
    Not,
    Or,
    PredApp,
    Sequent,
    Signature,
    Structure,
    TruthValue,
    Var,
    Verdict,
)
from services import semantics
from services.embedding import ax_set, correspondence, star_structure
from services.proofsys import instantiate, list_rules, side_condition_violation
from services.syntax import format_formula, format_sequent, free_vars, parse_formula
from utils import setup_logger

logger = setup_logger(__name__)

T, F, B = TruthValue.T, TruthValue.F, TruthValue.B
DESIGNATED_OPTIONS = (T, B)

NEG_FREE = (B,)
CONJ_FREE = ((T, B), (B, T), (B, B))
DISJ_FREE = ((T, B), (F, B), (B, T), (B, F), (B, B))
IMPL_FREE = ((T, B), (F, B), (B, T), (B, B))


def _classical_base() -> Tuple[Dict, Dict, Dict, Dict]:
    """Cells shared by every candidate; free cells are filled in later."""
    neg = {T: F, F: T}
    conj, disj, impl = {}, {}, {}
    for v, w in itertools.product(TRUTH_VALUES, repeat=2):
        if v is F or w is F:
            conj[(v, w)] = F
        elif v is T and w is T:
            conj[(v, w)] = T
        if v is T or w is T:
            disj[(v, w)] = T
        elif v is F and w is F:
            disj[(v, w)] = F
        if v is F and w is not B:
            impl[(v, w)] = T
        elif w is F:
            impl[(v, w)] = F
        elif v is T and w is T:
            impl[(v, w)] = T
    return neg, conj, disj, impl


def enumerate_candidates() -> Iterator[ConnectiveTable]:
    """All 8192 candidate tables in canonical order."""
    base_neg, base_conj, base_disj, base_impl = _classical_base()
    cells = len(NEG_FREE) + len(CONJ_FREE) + len(DISJ_FREE) + len(IMPL_FREE)
    for choice in itertools.product(DESIGNATED_OPTIONS, repeat=cells):
        values = iter(choice)
        neg = dict(base_neg)
        neg[B] = next(values)
        conj = {**base_conj, **{cell: next(values) for cell in CONJ_FREE}}
        disj = {**base_disj, **{cell: next(values) for cell in DISJ_FREE}}
        impl = {**base_impl, **{cell: next(values) for cell in IMPL_FREE}}
        yield ConnectiveTable(neg, conj, disj, impl)


def lp_table() -> ConnectiveTable:
    """The tables of the three-valued evaluator."""
    return ConnectiveTable(dict(semantics.NEG), dict(semantics.CONJ), dict(semantics.DISJ), dict(semantics.IMPL))


@dataclass(frozen=True)
class LogicCandidate:
    """Connective tables plus quantifiers folded from the conjunction and disjunction tables."""

    tables: ConnectiveTable

    def fold(self, table: Dict, values: Sequence[TruthValue]) -> TruthValue:
        result = values[0]
        for v in values[1:]:
            result = table[(result, v)]
        return result

    def evaluate(self, A: Formula, valuation: Dict[str, TruthValue], domain_size: int = 1) -> TruthValue:
        """Evaluate a formula over arity-0 predicates; quantifiers must bind a variable not free in the body."""
        c = self.tables
        if isinstance(A, Falsum):
            return F
        if isinstance(A, PredApp):
            return valuation[A.predicate]
        if isinstance(A, Not):
            return c.neg[self.evaluate(A.body, valuation, domain_size)]
        if isinstance(A, (And, Or, Imp)):
            table = c.conj if isinstance(A, And) else c.disj if isinstance(A, Or) else c.impl
            left = self.evaluate(A.left, valuation, domain_size)
            return table[(left, self.evaluate(A.right, valuation, domain_size))]
        if isinstance(A, (Forall, Exists)):
            if A.var in free_vars(A.body):
                raise ValueError("candidate evaluation only supports vacuous quantifiers")
            value = self.evaluate(A.body, valuation, domain_size)
            return self.fold(c.conj if isinstance(A, Forall) else c.disj, [value] * domain_size)
        raise ValueError(f"unsupported formula for candidate evaluation: {A!r}")


# Laws of logical equivalence over the metavariables A, A1, A2.

LAW_SIGNATURE = Signature(predicates={"A": 0, "A1": 0, "A2": 0})
LAW_TEXT: Dict[int, Tuple[str, str]] = {
    1: ("A /\\ F", "F"),
    2: ("A \\/ T", "T"),
    3: ("A /\\ T", "A"),
    4: ("A \\/ F", "A"),
    5: ("A /\\ A", "A"),
    6: ("A \\/ A", "A"),
    7: ("A1 /\\ A2", "A2 /\\ A1"),
    8: ("A1 \\/ A2", "A2 \\/ A1"),
    9: ("forall x. A", "A"),
    10: ("exists x. A", "A"),
    11: ("~~A", "A"),
    12: ("F -> A", "T"),
    13: ("(A1 \\/ ~A1) -> A2", "A2"),
}
LAWS: Dict[int, Tuple[Formula, Formula]] = {
    n: (parse_formula(lhs, LAW_SIGNATURE), parse_formula(rhs, LAW_SIGNATURE)) for n, (lhs, rhs) in LAW_TEXT.items()
}
QUANTIFIED_LAWS = frozenset({9, 10})
MAX_FOLD = 3


def parse_law_set(text: str) -> List[int]:
    """'1-13', '1..10', '1,2,5' or '' (no laws)."""
    laws: List[int] = []
    for part in text.replace("..", "-").split(","):
        part = part.strip()
        if not part:
            continue
        low, _, high = part.partition("-")
        first, last = int(low), int(high or low)
        laws.extend(range(first, last + 1))
    unknown = sorted(set(laws) - set(LAWS))
    if unknown:
        raise ValueError(f"unknown law number(s): {unknown}")
    return sorted(set(laws))


def satisfies_law(candidate, law: int) -> bool:
    """Both sides agree under every valuation of the metavariables (and every fold size ≤ 3)."""
    if isinstance(candidate, ConnectiveTable):
        candidate = LogicCandidate(candidate)
    lhs, rhs = LAWS[law]
    names = sorted({*_metavariables(lhs), *_metavariables(rhs)})
    sizes = range(1, MAX_FOLD + 1) if law in QUANTIFIED_LAWS else (1,)
    for values in itertools.product(TRUTH_VALUES, repeat=len(names)):
        valuation = dict(zip(names, values))
        for size in sizes:
            if candidate.evaluate(lhs, valuation, size) is not candidate.evaluate(rhs, valuation, size):
                return False
    return True


def _metavariables(A: Formula) -> List[str]:
    if isinstance(A, PredApp):
        return [A.predicate]
    if isinstance(A, Not):
        return _metavariables(A.body)
    if isinstance(A, (And, Or, Imp)):
        return _metavariables(A.left) + _metavariables(A.right)
    if isinstance(A, (Forall, Exists)):
        return _metavariables(A.body)
    return []


@dataclass(frozen=True)
class CensusResult:
    laws: Tuple[int, ...]
    count: int
    survivors: Tuple[ConnectiveTable, ...] = ()


SURVIVOR_LIMIT = 32


def count_candidates(laws: Iterable[int] = ()) -> CensusResult:
    """Count the candidates satisfying every law; survivors are listed when there are at most 32."""
    laws = tuple(sorted(set(laws)))
    survivors: List[ConnectiveTable] = []
    count = 0
    for table in enumerate_candidates():
        candidate = LogicCandidate(table)
        if all(satisfies_law(candidate, law) for law in laws):
            count += 1
            if len(survivors) < SURVIVOR_LIMIT:
                survivors.append(table)
    listed = tuple(survivors) if count <= SURVIVOR_LIMIT else ()
    logger.info(f"CENSUS: laws {list(laws)} leave {count} candidate(s)")
    return CensusResult(laws, count, listed)


def instantiate_law(law: int, mapping: Dict[str, Formula]) -> Tuple[Formula, Formula]:
    """Replace the metavariables of a law by formulas."""

    def fill(A: Formula) -> Formula:
        if isinstance(A, PredApp):
            return mapping[A.predicate]
        if isinstance(A, Not):
            return Not(fill(A.body))
        if isinstance(A, (And, Or, Imp)):
            return type(A)(fill(A.left), fill(A.right))
        if isinstance(A, (Forall, Exists)):
            return type(A)(A.var, fill(A.body))
        return A

    lhs, rhs = LAWS[law]
    return fill(lhs), fill(rhs)


def evaluator_satisfies_law(law: int, max_domain: int = 3, instances: Optional[Sequence[Dict[str, Formula]]] = None) -> bool:
    """Check a law against the shipped evaluator by bounded equivalence checking.

    Default instances are atoms p, q for the propositional laws and P(y) with
    one unary predicate for the quantifier laws.
    """
    if instances is None:
        if law in QUANTIFIED_LAWS:
            body = PredApp("P", (Var("y"),))
            instances = [{"A": body}, {"A": Exists("y", body)}, {"A": Not(body)}]
        else:
            p, q = PredApp("p"), PredApp("q")
            instances = [{"A": p, "A1": p, "A2": q}]
    for mapping in instances:
        lhs, rhs = instantiate_law(law, mapping)
        if not isinstance(semantics.check_equivalence(lhs, rhs, max_domain), NoCounterModelUpTo):
            return False
    return True


# Consequence-relation properties


@dataclass(frozen=True)
class Agreement:
    """Two sides of a bounded 'iff'; None marks a side the search budget could not settle."""

    left: Optional[bool]
    right: Optional[bool]

    @property
    def agree(self) -> bool:
        return self.left is not None and self.left == self.right


def _passes(verdict: Verdict) -> Optional[bool]:
    if isinstance(verdict, Inconclusive):
        return None
    return isinstance(verdict, NoCounterModelUpTo)


def _entails(gamma: Sequence[Formula], A: Formula, max_domain: Optional[int] = None, classical: bool = False) -> Optional[bool]:
    return _passes(semantics.check_consequence(gamma, A, max_domain, classical=classical))


def _both(x: Optional[bool], y: Optional[bool]) -> Optional[bool]:
    if x is None or y is None:
        return None
    return x and y


def check_internalization_consistency(A: Formula, max_domain: int = 1) -> Agreement:
    """A is consistent iff (A -> F) \\/ (~A -> F) is valid."""
    consistent = _passes(semantics.check_consistency(A, max_domain))
    internal = _entails([], Or(Imp(A, FALSUM), Imp(Not(A), FALSUM)), max_domain)
    return Agreement(consistent, internal)


def check_internalization_equivalence(A1: Formula, A2: Formula, max_domain: int = 1) -> Agreement:
    """A1 and A2 are equivalent iff (A1 <-> A2) /\\ (~A1 <-> ~A2) is valid."""
    equivalent = _passes(semantics.check_equivalence(A1, A2, max_domain))
    internal = _entails([], And(Iff(A1, A2), Iff(Not(A1), Not(A2))), max_domain)
    return Agreement(equivalent, internal)


@dataclass(frozen=True)
class Containment:
    """Three-valued and classical verdicts for one consequence query."""

    three_valued: Verdict
    classical: Verdict

    @property
    def agree(self) -> bool:
        """Holding three-valued but failing classically would break containment."""
        return not (isinstance(self.three_valued, NoCounterModelUpTo) and isinstance(self.classical, CounterModel))


def check_containment(gamma: Sequence[Formula], A: Formula, max_domain: Optional[int] = None) -> Containment:
    gamma = list(gamma)
    return Containment(
        semantics.check_consequence(gamma, A, max_domain),
        semantics.check_consequence(gamma, A, max_domain, classical=True),
    )


def check_proper_connectives(
    gamma: Sequence[Formula],
    A1: Formula,
    A2: Formula,
    A3: Optional[Formula] = None,
    x: str = "x",
    max_domain: Optional[int] = None,
) -> Dict[str, Agreement]:
    """Bounded checks of the deduction, conjunction, disjunction and quantifier properties.

    The universal property uses A1 as the quantified formula and is skipped when
    x is free in gamma; the existential one is skipped when x is free in gamma or A2.
    """
    gamma = list(gamma)

    def ent(hyps: Sequence[Formula], A: Formula) -> Optional[bool]:
        return _entails(hyps, A, max_domain)

    report = {
        "b1": Agreement(ent(gamma + [A1], A2), ent(gamma, Imp(A1, A2))),
        "b2": Agreement(ent(gamma, And(A1, A2)), _both(ent(gamma, A1), ent(gamma, A2))),
    }
    if A3 is not None:
        report["b3"] = Agreement(ent(gamma + [Or(A1, A2)], A3), _both(ent(gamma + [A1], A3), ent(gamma + [A2], A3)))
    if x not in free_vars(gamma):
        report["b4"] = Agreement(ent(gamma, Forall(x, A1)), ent(gamma, A1))
        if x not in free_vars(A2):
            report["b5"] = Agreement(ent(gamma + [Exists(x, A1)], A2), ent(gamma + [A1], A2))
    return report


# Formula families


UnaryOp = Callable[[Formula], Formula]
BinaryOp = Callable[[Formula, Formula], Formula]


def enumerate_formulas(
    atoms: Sequence[Formula],
    depth: int,
    unary: Sequence[UnaryOp] = (Not,),
    binary: Sequence[BinaryOp] = (And, Or, Imp),
) -> List[Formula]:
    """Every formula of depth at most ``depth`` built from the atoms (depth 1)."""
    levels: List[List[Formula]] = [list(atoms)]
    for _ in range(depth - 1):
        below = [f for level in levels for f in level]
        newest = levels[-1]
        older = below[: len(below) - len(newest)]
        level = [op(f) for op in unary for f in newest]
        for op in binary:
            level += [op(a, b) for a in newest for b in below]
            level += [op(a, b) for a in older for b in newest]
        levels.append(level)
    return [f for level in levels for f in level]


def quantifier_ops(variables: Sequence[str]) -> List[UnaryOp]:
    ops: List[UnaryOp] = []
    for v in variables:
        ops.append(lambda A, v=v: Forall(v, A))
        ops.append(lambda A, v=v: Exists(v, A))
    return ops


# Embedding correspondence


@dataclass
class EmbeddingReport:
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def embedding_sweep(
    sig: Signature,
    formulas: Sequence[Formula],
    max_domain: int = 2,
    equality: str = "identity",
) -> EmbeddingReport:
    """Check, for every structure up to max_domain and every assignment of the free
    variables, that A has value v exactly when [[A]]v holds in the star structure,
    and that every axiom of the translation holds there."""
    report = EmbeddingReport()
    formulas = list(formulas)
    variables = sorted(free_vars(formulas))
    axioms = ax_set(sig, formulas)
    for size in range(1, max_domain + 1):
        for s in semantics.enumerate_structures(sig, size, equality=equality):
            star = star_structure(s)
            for a in semantics.enumerate_assignments(variables, s.domain):
                for axiom in axioms:
                    report.checked += 1
                    if not semantics.holds(axiom, star, a):
                        report.failures.append(f"axiom {format_formula(axiom)} fails at {a} in {s.domain}")
                for A in formulas:
                    report.checked += 1
                    results = correspondence(A, s, star, a)
                    if not all(results.values()):
                        report.failures.append(f"{format_formula(A)} at {a} in {s.domain}")
    logger.info(f"EMBEDDING_SWEEP: {report.checked} checks, {len(report.failures)} failure(s)")
    return report


# Rule soundness sweep


class PointSpace:
    """A finite list of (structure, assignment) points with cached designation masks."""

    def __init__(self, points: List[Tuple[Structure, Dict[str, str]]]):
        self.points = points
        self.full = (1 << len(points)) - 1
        self._masks: Dict[Formula, int] = {}

    @classmethod
    def over(
        cls,
        sig: Signature,
        max_domain: int,
        variables: Sequence[str],
        classical: bool,
        equality: str,
        with_equality: bool = True,
    ) -> "PointSpace":
        points = []
        for size in range(1, max_domain + 1):
            for s in semantics.enumerate_structures(sig, size, classical, equality, with_equality):
                for a in semantics.enumerate_assignments(variables, s.domain):
                    points.append((s, a))
        return cls(points)

    def mask(self, A: Formula) -> int:
        cached = self._masks.get(A)
        if cached is None:
            cached = 0
            for k, (s, a) in enumerate(self.points):
                if semantics.holds(A, s, a):
                    cached |= 1 << k
            self._masks[A] = cached
        return cached

    def refuting_points(self, sequent: Sequent) -> int:
        context = self.full
        for h in sequent.hypotheses:
            context &= self.mask(h)
        return context & ~self.mask(sequent.conclusion)

    def valid(self, sequent: Sequent) -> bool:
        return self.refuting_points(sequent) == 0

    def first_point(self, bits: int) -> Tuple[Structure, Dict[str, str]]:
        return self.points[(bits & -bits).bit_length() - 1]


@dataclass
class RuleReport:
    rule: str
    instances: int = 0
    failures: int = 0
    first_failure: Optional[str] = None
    witness: Optional[Tuple[Structure, Dict[str, str]]] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


FIRST_ORDER_RULES = frozenset({"Forall-I", "Forall-E", "Exists-I", "Exists-E", "Eq-I", "Eq-E", "Forall-M", "Exists-M"})

RULE_METAS: Dict[str, Tuple[str, ...]] = {
    "I": ("A",),
    "EM": ("A",),
    "True-I": (),
    "Falsum-E": ("A",),
    "And-I": ("A1", "A2"),
    "And-E": ("A1", "A2", "i"),
    "Or-I": ("A1", "A2", "i"),
    "Or-E": ("A1", "A2", "A3"),
    "Imp-I": ("A1", "A2"),
    "Imp-E": ("A1", "A2"),
    "Forall-I": ("x", "A"),
    "Forall-E": ("x", "A", "t"),
    "Exists-I": ("x", "A", "t"),
    "Exists-E": ("x", "A1", "A2"),
    "Eq-I": ("t",),
    "Eq-E": ("t1", "t2", "x", "A"),
    "Not-M": ("A", "dir"),
    "And-M": ("A1", "A2", "dir"),
    "Or-M": ("A1", "A2", "dir"),
    "Imp-M": ("A1", "A2", "dir"),
    "Forall-M": ("x", "A", "dir"),
    "Exists-M": ("x", "A", "dir"),
    "C": ("A1", "A2"),
}


@dataclass(frozen=True)
class SweepSpace:
    """Formulas, variables, terms and contexts that rule instances range over, and the points they are judged at."""

    formulas: Tuple[Formula, ...]
    variables: Tuple[str, ...]
    contexts: Tuple[Tuple[Formula, ...], ...]
    points: PointSpace

    def options(self, meta: str) -> Sequence:
        if meta.startswith("A"):
            return self.formulas
        if meta == "x":
            return self.variables
        if meta.startswith("t"):
            return [Var(v) for v in self.variables]
        if meta == "i":
            return (1, 2)
        return ("down", "up")


def propositional_space(classical: bool = False, depth: int = 2) -> SweepSpace:
    p, q = PredApp("p"), PredApp("q")
    formulas = enumerate_formulas([p, q, FALSUM], depth)
    sig = Signature(predicates={"p": 0, "q": 0})
    points = PointSpace.over(sig, 1, (), classical, "identity", with_equality=False)
    return SweepSpace(tuple(formulas), ("x", "y"), ((), (p,), (Not(p),), (p, Not(p))), points)


def first_order_space(classical: bool = False, equality: str = "identity", max_domain: int = 2) -> SweepSpace:
    x, y = Var("x"), Var("y")
    atoms = [PredApp("P", (x,)), PredApp("P", (y,)), Eq(x, y), FALSUM]
    formulas = enumerate_formulas(atoms, 2, unary=[Not] + quantifier_ops(["x", "y"]))
    sig = Signature(predicates={"P": 1})
    points = PointSpace.over(sig, max_domain, ("x", "y"), classical, equality)
    contexts = ((), (atoms[0],), (atoms[2],), (atoms[0], atoms[2]))
    return SweepSpace(tuple(formulas), ("x", "y"), contexts, points)


def sweep_rule(rule: str, space: SweepSpace) -> RuleReport:
    """Every instance whose premises hold at all points must have a conclusion that does too."""
    report = RuleReport(rule)
    metas = RULE_METAS[rule]
    for gamma in space.contexts:
        for values in itertools.product(*(space.options(m) for m in metas)):
            m = dict(zip(metas, values))
            if side_condition_violation(rule, gamma, m):
                continue
            premises, conclusion = instantiate(rule, gamma, m)
            report.instances += 1
            if not all(space.points.valid(p) for p in premises):
                continue
            refuting = space.points.refuting_points(conclusion)
            if refuting:
                report.failures += 1
                if report.first_failure is None:
                    shown = "  ".join(format_sequent(p) for p in premises)
                    report.first_failure = f"{shown}  /  {format_sequent(conclusion)}"
                    report.witness = space.points.first_point(refuting)
    return report


def rule_soundness_sweep(
    classical: bool = False,
    equality: str = "identity",
    rules: Optional[Iterable[str]] = None,
) -> List[RuleReport]:
    """Sweep every rule, including C, over small instance families.

    Propositional rules range over formulas of depth <= 2 in p, q and F; the
    quantifier and equality rules over a signature with one unary predicate,
    domains of size <= 2 and the variables x, y.
    """
    selected = [r.id for r in list_rules(Mode.CLASSICAL)] if rules is None else list(rules)
    spaces = {}
    reports = []
    for rule in selected:
        kind = "first-order" if rule in FIRST_ORDER_RULES else "propositional"
        if kind not in spaces:
            if kind == "first-order":
                spaces[kind] = first_order_space(classical, equality)
            else:
                spaces[kind] = propositional_space(classical)
        report = sweep_rule(rule, spaces[kind])
        logger.debug(f"SOUNDNESS_SWEEP: {rule}: {report.instances} instances, {report.failures} failure(s)")
        reports.append(report)
    failed = [r.rule for r in reports if not r.passed]
    logger.info(f"SOUNDNESS_SWEEP: {len(reports)} rule(s) swept, failing: {failed or 'none'}")
    return reports

