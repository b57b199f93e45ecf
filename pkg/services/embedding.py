"""Translation of three-valued sequents into classical first-order logic.

Predicates become function symbols into three truth tokens, so that
``P(t)`` being true, false or both is expressed by the classical equations
``P__hat(t) = __tt`` and ``P__hat(t) = __ff`` or by neither. Quantifiers are
relativized to the individuals through ``__Univ``; ``__Bool`` holds of the
tokens. Equality goes through the function ``__eqF``.
"""
import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from errors import EmbeddingError
from models import (
    FALSUM,
    TOP,
    And,
    Apply,
    Assignment,
    Eq,
    Exists,
    Falsum,
    Forall,
    Formula,
    Iff,
    Imp,
    Not,
    Or,
    PredApp,
    Sequent,
    Signature,
    Structure,
    Term,
    TruthValue,
    Var,
    identity_equality,
)
from services.semantics import eval_formula
from services.syntax import free_vars, make_sequent, occurring_signature
from utils import setup_logger

logger = setup_logger(__name__)

HAT_SUFFIX = "__hat"
TT, FF, BB = "__tt", "__ff", "__bb"
BOOL, UNIV, EQF = "__Bool", "__Univ", "__eqF"
RESERVED = frozenset({TT, FF, BB, BOOL, UNIV, EQF})
AX_VARIABLE = "__o{}"

# Domain elements standing for the truth values in star structures.
TOKENS = {TruthValue.T: "tt", TruthValue.F: "ff", TruthValue.B: "bb"}


class TranslationKind(Enum):
    TRUE = "t"
    FALSE = "f"
    BOTH = "b"


def hat(name: str) -> str:
    return name + HAT_SUFFIX


@dataclass(frozen=True)
class SignatureHat:
    """The classical signature a three-valued signature translates into."""

    source: Signature
    target: Signature

    def symbol(self, name: str) -> str:
        """The translated name of a source symbol; functions are unchanged."""
        if name in self.source.functions:
            return name
        if name in self.source.predicates:
            return hat(name)
        raise KeyError(name)


def translate_signature(sig: Signature) -> SignatureHat:
    functions: Dict[str, int] = dict(sig.functions)
    for name in sorted(set(sig.functions) | set(sig.predicates)):
        if name in RESERVED:
            raise EmbeddingError(f"symbol '{name}' clashes with a reserved symbol")
    for name, arity in sorted(sig.predicates.items()):
        image = hat(name)
        if image in sig.functions or image in sig.predicates:
            raise EmbeddingError(f"translation of predicate '{name}' clashes with symbol '{image}'")
        functions[image] = arity
    functions.update({TT: 0, FF: 0, BB: 0, EQF: 2})
    return SignatureHat(sig, Signature(functions, {BOOL: 1, UNIV: 1}))


def translate_term(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    return Apply(t.function, tuple(translate_term(a) for a in t.args))


def _const(name: str) -> Term:
    return Apply(name)


def _univ(t: Term) -> Formula:
    return PredApp(UNIV, (t,))


def _bool(t: Term) -> Formula:
    return PredApp(BOOL, (t,))


def _value_term(A: Formula) -> Term:
    if isinstance(A, PredApp):
        return Apply(hat(A.predicate), tuple(translate_term(t) for t in A.args))
    return Apply(EQF, (translate_term(A.left), translate_term(A.right)))


def translate_formula(A: Formula, kind: TranslationKind) -> Formula:
    if kind is TranslationKind.BOTH:
        return Not(Or(translate_formula(A, TranslationKind.TRUE), translate_formula(A, TranslationKind.FALSE)))
    true = kind is TranslationKind.TRUE
    t, f = TranslationKind.TRUE, TranslationKind.FALSE
    if isinstance(A, Falsum):
        return FALSUM if true else TOP
    if isinstance(A, (PredApp, Eq)):
        return Eq(_value_term(A), _const(TT if true else FF))
    if isinstance(A, Not):
        return translate_formula(A.body, f if true else t)
    if isinstance(A, And):
        node = And if true else Or
        return node(translate_formula(A.left, kind), translate_formula(A.right, kind))
    if isinstance(A, Or):
        node = Or if true else And
        return node(translate_formula(A.left, kind), translate_formula(A.right, kind))
    if isinstance(A, Imp):
        if true:
            return Or(translate_formula(A.left, f), translate_formula(A.right, t))
        return And(Not(translate_formula(A.left, f)), translate_formula(A.right, f))
    universal = isinstance(A, Forall) == true
    body = translate_formula(A.body, kind)
    if universal:
        return Forall(A.var, Imp(_univ(Var(A.var)), body))
    return Exists(A.var, And(_univ(Var(A.var)), body))


def _conjoin(formulas: Sequence[Formula]) -> Formula:
    result = formulas[0]
    for f in formulas[1:]:
        result = And(result, f)
    return result


def _disjoin(formulas: Sequence[Formula]) -> Formula:
    result = formulas[0]
    for f in formulas[1:]:
        result = Or(result, f)
    return result


def _closure(variables: List[str], body: Formula) -> Formula:
    for v in reversed(variables):
        body = Forall(v, body)
    return body


def _sorted_closure(arity: int, conclusion) -> Formula:
    """forall o1..on. Univ(o1) /\\ ... /\\ Univ(on) -> conclusion(o1..on)"""
    variables = [AX_VARIABLE.format(i) for i in range(1, arity + 1)]
    args = tuple(Var(v) for v in variables)
    guard = _conjoin([_univ(a) for a in args])
    return _closure(variables, Imp(guard, conclusion(args)))


def ax_set(sig: Signature, formulas: Iterable[Formula]) -> List[Formula]:
    """The axioms fixing the intended reading of the translated signature.

    Groups, in order: distinct tokens; Bool holds exactly of the tokens; some
    individual exists; individuals and tokens are disjoint; constants and
    functions stay among individuals; predicate values and equality values are
    tokens; equality is designated on the diagonal; free variables are individuals.
    """
    o1 = Var(AX_VARIABLE.format(1))
    tt, ff, bb = _const(TT), _const(FF), _const(BB)
    constants = sorted(name for name, arity in sig.functions.items() if arity == 0)
    functions = sorted(name for name, arity in sig.functions.items() if arity > 0)
    propositions = sorted(name for name, arity in sig.predicates.items() if arity == 0)
    predicates = sorted(name for name, arity in sig.predicates.items() if arity > 0)

    axioms: List[Formula] = [
        _conjoin([Not(Eq(tt, ff)), Not(Eq(tt, bb)), Not(Eq(ff, bb))]),
        Forall(o1.name, Iff(_bool(o1), _disjoin([Eq(o1, tt), Eq(o1, ff), Eq(o1, bb)]))),
        Exists(o1.name, _univ(o1)),
        Forall(o1.name, Not(Iff(_univ(o1), _bool(o1)))),
    ]
    axioms += [_univ(_const(c)) for c in constants]
    axioms += [
        _sorted_closure(sig.functions[f], lambda args, f=f: _univ(Apply(f, args))) for f in functions
    ]
    axioms += [_bool(_const(hat(p))) for p in propositions]
    axioms += [
        _sorted_closure(sig.predicates[p], lambda args, p=p: _bool(Apply(hat(p), args))) for p in predicates
    ]
    axioms.append(_sorted_closure(2, lambda args: _bool(Apply(EQF, args))))
    diagonal = Apply(EQF, (o1, o1))
    axioms.append(Forall(o1.name, Or(Eq(diagonal, tt), Eq(diagonal, bb))))
    axioms += [_univ(Var(x)) for x in sorted(free_vars(list(formulas)))]
    return axioms


def designated_translation(A: Formula) -> Formula:
    """[[A]]t \\/ [[A]]b: A holds in the three-valued sense."""
    return Or(translate_formula(A, TranslationKind.TRUE), translate_formula(A, TranslationKind.BOTH))


def translate_sequent_parts(s: Sequent) -> Tuple[List[Formula], List[Formula], Formula]:
    """Axioms, translated premises and translated conclusion of a sequent."""
    formulas = list(s.hypotheses) + [s.conclusion]
    sig = occurring_signature(formulas)
    translate_signature(sig)  # raises on name clashes
    axioms = ax_set(sig, formulas)
    premises = [designated_translation(h) for h in s.hypotheses]
    logger.debug(f"TRANSLATE: {len(premises)} premise(s), {len(axioms)} axiom(s)")
    return axioms, premises, designated_translation(s.conclusion)


def translate_sequent(s: Sequent) -> Sequent:
    axioms, premises, conclusion = translate_sequent_parts(s)
    return make_sequent(axioms + premises, conclusion)


# Star structures


def star_structure(s: Structure, token_default: TruthValue = TruthValue.T) -> Structure:
    """The classical structure encoding s: its individuals plus the three truth tokens.

    Function symbols applied to a token return the first individual; predicate
    values and equality values on tuples containing a token are token_default.
    """
    clash = set(TOKENS.values()) & set(s.domain)
    if clash:
        raise EmbeddingError(f"domain element(s) {sorted(clash)} clash with the truth tokens")
    individuals = set(s.domain)
    domain = tuple(s.domain) + tuple(TOKENS.values())
    default = TOKENS[token_default]

    def total(table: Dict[Tuple[str, ...], str], arity: int, fill: str) -> Dict[Tuple[str, ...], str]:
        return {
            args: table[args] if individuals.issuperset(args) else fill
            for args in itertools.product(domain, repeat=arity)
        }

    functions: Dict[str, Dict[Tuple[str, ...], str]] = {}
    for name, table in s.functions.items():
        functions[name] = total(table, s.arity(name), s.domain[0])
    for name, table in s.predicates.items():
        tokens = {args: TOKENS[v] for args, v in table.items()}
        functions[hat(name)] = total(tokens, s.arity(name), default)
    functions[EQF] = total({k: TOKENS[v] for k, v in s.equality.items()}, 2, default)
    functions[TT] = {(): TOKENS[TruthValue.T]}
    functions[FF] = {(): TOKENS[TruthValue.F]}
    functions[BB] = {(): TOKENS[TruthValue.B]}

    predicates = {
        UNIV: {(d,): TruthValue.T if d in individuals else TruthValue.F for d in domain},
        BOOL: {(d,): TruthValue.F if d in individuals else TruthValue.T for d in domain},
    }
    return Structure(domain, functions, predicates, identity_equality(domain))


def correspondence(A: Formula, s: Structure, star: Structure, a: Assignment) -> Dict[TruthValue, bool]:
    """For each truth value v: whether 'A has value v in s' agrees with '[[A]]v holds in star'."""
    value = eval_formula(A, s, a)
    kinds = {TruthValue.T: TranslationKind.TRUE, TruthValue.F: TranslationKind.FALSE, TruthValue.B: TranslationKind.BOTH}
    return {
        v: (value is v) == (eval_formula(translate_formula(A, k), star, a) is TruthValue.T)
        for v, k in kinds.items()
    }


def correspondence_holds(A: Formula, s: Structure, a: Assignment, star: Optional[Structure] = None) -> bool:
    star = star or star_structure(s)
    return all(correspondence(A, s, star, a).values())
