"""Concrete syntax, free variables, substitution and alpha-equivalence.

Grammar (loosest binding first)::

    formula  := imp ('<->' formula)?
    imp      := disj ('->' imp)?              right-associative
    disj     := conj ('\\/' conj)*             left-associative
    conj     := unary ('/\\' unary)*           left-associative
    unary    := '~' unary | quant | primary
    quant    := ('forall' | 'exists') var (',' var)* '.' formula
    primary  := '(' formula ')' | 'F' | 'T' | atom
    atom     := pred ('(' term (',' term)* ')')? | term ('=' | '!=') term

A quantifier body extends as far to the right as possible.
"""
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

import parsy
from parsy import eof, generate, line_info, regex, seq, string

from errors import ParseError, SignatureError
from models import (
    FALSUM,
    IDENTIFIER,
    RESERVED_WORDS,
    TOP,
    And,
    Apply,
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
    Term,
    Var,
)
from utils import setup_logger

logger = setup_logger(__name__)

Expr = Union[Term, Formula]

whitespace = regex(r"(\s|#[^\n]*)*")


def lexeme(p: parsy.Parser) -> parsy.Parser:
    return p << whitespace


def token(text: str) -> parsy.Parser:
    return lexeme(string(text))


def keyword(word: str) -> parsy.Parser:
    return lexeme(regex(word + r"(?![A-Za-z0-9_'])"))


name_token = lexeme(regex(r"[A-Za-z_][A-Za-z0-9_]*'*")).desc("identifier")

lparen = token("(")
rparen = token(")")
comma = token(",")


@generate("identifier")
def identifier():
    name = yield name_token
    if name in RESERVED_WORDS:
        yield parsy.fail(f"identifier (got reserved word '{name}')")
    return name


class FormulaParser:
    """Parser for formulas, terms and sequents over a fixed signature.

    With ``infer=True`` undeclared symbols are declared on first use: an
    identifier standing as an atom becomes a predicate, an identifier applied
    to arguments inside a term becomes a function. Undeclared bare identifiers
    inside terms are always variables.
    """

    def __init__(self, sig: Optional[Signature] = None, infer: bool = False):
        sig = sig or Signature()
        self.functions: Dict[str, int] = dict(sig.functions)
        self.predicates: Dict[str, int] = dict(sig.predicates)
        self.infer = infer
        self._build()

    @property
    def signature(self) -> Signature:
        return Signature(dict(self.functions), dict(self.predicates))

    # grammar

    def _build(self):
        @generate("term")
        def term():
            pos = yield line_info
            name = yield identifier
            args = yield (lparen >> term.sep_by(comma, min=1) << rparen).optional()
            return self._make_term(name, tuple(args) if args is not None else None, pos)

        @generate("atom")
        def atom():
            pos = yield line_info
            name = yield identifier
            args = yield (lparen >> term.sep_by(comma, min=1) << rparen).optional()
            args = tuple(args) if args is not None else None
            if name in self.predicates:
                return self._make_predicate(name, args, pos)
            op = yield (token("!=") | token("=")).optional()
            if op is None:
                if self.infer and name not in self.functions:
                    return self._make_predicate(name, args, pos)
                raise self._error(f"unknown predicate symbol '{name}'", pos)
            left = self._make_term(name, args, pos)
            right = yield term
            return Eq(left, right) if op == "=" else Not(Eq(left, right))

        @generate("quantified formula")
        def quantified():
            pos = yield line_info
            kind = yield keyword("forall") | keyword("exists")
            names = yield identifier.sep_by(comma, min=1)
            yield token(".")
            body = yield formula
            for name in names:
                if name in self.functions or name in self.predicates:
                    raise self._error(f"cannot bind symbol '{name}' as a variable", pos)
            node = Forall if kind.startswith("forall") else Exists
            for name in reversed(names):
                body = node(name, body)
            return body

        @generate("formula")
        def primary():
            result = yield (
                (lparen >> formula << rparen)
                | keyword("F").result(FALSUM)
                | keyword("T").result(TOP)
                | atom
            )
            return result

        @generate("formula")
        def unary():
            negated = yield token("~").optional()
            if negated is not None:
                body = yield unary
                return Not(body)
            return (yield quantified | primary)

        @generate("formula")
        def conj():
            first = yield unary
            rest = yield (token("/\\") >> unary).many()
            for right in rest:
                first = And(first, right)
            return first

        @generate("formula")
        def disj():
            first = yield conj
            rest = yield (token("\\/") >> conj).many()
            for right in rest:
                first = Or(first, right)
            return first

        @generate("formula")
        def imp():
            left = yield disj
            right = yield (token("->") >> imp).optional()
            return left if right is None else Imp(left, right)

        @generate("formula")
        def formula():
            left = yield imp
            right = yield (token("<->") >> formula).optional()
            return left if right is None else Iff(left, right)

        self.term = term
        self.formula = formula
        self.sequent = seq(formula.sep_by(token(";")), token("|-") >> formula)

    # symbol resolution

    def _error(self, message: str, pos: Tuple[int, int]) -> ParseError:
        return ParseError(message, pos[0] + 1, pos[1] + 1)

    def _make_term(self, name: str, args: Optional[Tuple[Term, ...]], pos) -> Term:
        if name in self.predicates:
            raise self._error(f"predicate symbol '{name}' used as a term", pos)
        if name not in self.functions:
            if args is None:
                return Var(name)
            if not self.infer:
                raise self._error(f"unknown function symbol '{name}'", pos)
            self.functions[name] = len(args)
        arity = self.functions[name]
        given = len(args or ())
        if given != arity:
            raise self._error(f"function '{name}' expects {arity} argument(s), got {given}", pos)
        return Apply(name, args or ())

    def _make_predicate(self, name: str, args: Optional[Tuple[Term, ...]], pos) -> PredApp:
        if name not in self.predicates:
            self.predicates[name] = len(args or ())
        arity = self.predicates[name]
        given = len(args or ())
        if given != arity:
            raise self._error(f"predicate '{name}' expects {arity} argument(s), got {given}", pos)
        return PredApp(name, args or ())

    # entry points

    def _run(self, parser: parsy.Parser, text: str):
        try:
            return (whitespace >> parser << eof).parse(text)
        except parsy.ParseError as exc:
            line, column = parsy.line_info_at(exc.stream, exc.index)
            expected = ", ".join(sorted(exc.expected))
            raise ParseError(f"expected {expected}", line + 1, column + 1) from None

    def parse_formula(self, text: str) -> Formula:
        return self._run(self.formula, text)

    def parse_term(self, text: str) -> Term:
        return self._run(self.term, text)

    def parse_sequent(self, text: str) -> Sequent:
        hypotheses, conclusion = self._run(self.sequent, text)
        return make_sequent(hypotheses, conclusion)


def parse_formula(text: str, sig: Signature) -> Formula:
    return FormulaParser(sig).parse_formula(text)


def parse_term(text: str, sig: Signature) -> Term:
    return FormulaParser(sig).parse_term(text)


def parse_sequent(text: str, sig: Signature) -> Sequent:
    return FormulaParser(sig).parse_sequent(text)


# Signature files

declaration = seq(
    lexeme(regex(r"fun|pred")),
    name_token << token("/"),
    lexeme(regex(r"-?\d+")).map(int),
)


def parse_signature(text: str) -> Signature:
    """Read ``fun name/arity`` and ``pred name/arity`` declarations.

    Declarations are separated by newlines or ``;``. ``#`` starts a comment.
    """
    functions: Dict[str, int] = {}
    predicates: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        for part in raw.split("#", 1)[0].split(";"):
            if not part.strip():
                continue
            try:
                kind, name, arity = (whitespace >> declaration << eof).parse(part)
            except parsy.ParseError:
                raise ParseError(f"bad declaration '{part.strip()}'", number, 1) from None
            if name in functions or name in predicates:
                raise SignatureError(f"line {number}: symbol '{name}' declared twice")
            (functions if kind == "fun" else predicates)[name] = arity
    return Signature(functions, predicates)


# Printing

# Binding strength; quantifiers are handled by position instead.
PRECEDENCE = {Imp: 1, Or: 2, And: 3, Not: 4}
OPERATORS = {And: "/\\", Or: "\\/", Imp: "->"}
# (left, right) contexts for the operands of each binary connective.
OPERAND_CONTEXT = {And: (3, 4), Or: (2, 3), Imp: (2, 1)}


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.function
    return f"{t.function}({', '.join(format_term(a) for a in t.args)})"


def format_formula(a: Formula) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    return _format(a, 0, True)


def _format(a: Formula, context: int, tail: bool) -> str:
    if isinstance(a, Falsum):
        return "F"
    if isinstance(a, PredApp):
        if not a.args:
            return a.predicate
        return f"{a.predicate}({', '.join(format_term(t) for t in a.args)})"
    if isinstance(a, Eq):
        return f"{format_term(a.left)} = {format_term(a.right)}"
    if isinstance(a, Not):
        if isinstance(a.body, Eq):
            return f"{format_term(a.body.left)} != {format_term(a.body.right)}"
        return "~" + _format(a.body, PRECEDENCE[Not], tail)
    if isinstance(a, (Forall, Exists)):
        word = "forall" if isinstance(a, Forall) else "exists"
        text = f"{word} {a.var}. {_format(a.body, 0, True)}"
        return text if tail else f"({text})"
    kind = type(a)
    wrap = PRECEDENCE[kind] < context
    left_context, right_context = OPERAND_CONTEXT[kind]
    left = _format(a.left, left_context, False)
    right = _format(a.right, right_context, True if wrap else tail)
    text = f"{left} {OPERATORS[kind]} {right}"
    return f"({text})" if wrap else text


def format_sequent(s: Sequent) -> str:
    hypotheses = "; ".join(format_formula(h) for h in s.hypotheses)
    return f"{hypotheses} |- {format_formula(s.conclusion)}".lstrip()


# Variables and substitution


def free_vars(e: Union[Expr, Iterable[Formula]]) -> Set[str]:
    """Free variables of a term, a formula, or the union over a collection of formulas."""
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Apply):
        return set().union(*(free_vars(a) for a in e.args))
    if isinstance(e, Falsum):
        return set()
    if isinstance(e, PredApp):
        return set().union(*(free_vars(a) for a in e.args))
    if isinstance(e, Eq):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, Not):
        return free_vars(e.body)
    if isinstance(e, (And, Or, Imp)):
        return free_vars(e.left) | free_vars(e.right)
    if isinstance(e, (Forall, Exists)):
        return free_vars(e.body) - {e.var}
    return set().union(*(free_vars(f) for f in e))


def fresh_variable(base: str, avoid: Set[str]) -> str:
    """The smallest primed variant of base not in avoid."""
    candidate = base + "'"
    while candidate in avoid:
        candidate += "'"
    return candidate


def substitute(x: str, t: Term, e: Expr) -> Expr:
    """Replace the free occurrences of x in e by t, renaming binders that would capture."""
    if x not in free_vars(e):
        return e
    if isinstance(e, Var):
        return t
    if isinstance(e, Apply):
        return Apply(e.function, tuple(substitute(x, t, a) for a in e.args))
    if isinstance(e, PredApp):
        return PredApp(e.predicate, tuple(substitute(x, t, a) for a in e.args))
    if isinstance(e, Eq):
        return Eq(substitute(x, t, e.left), substitute(x, t, e.right))
    if isinstance(e, Not):
        return Not(substitute(x, t, e.body))
    if isinstance(e, (And, Or, Imp)):
        return type(e)(substitute(x, t, e.left), substitute(x, t, e.right))
    # quantifier binding some y != x, with x free in the body
    var, body = e.var, e.body
    term_vars = free_vars(t)
    if var in term_vars:
        renamed = fresh_variable(var, free_vars(body) | term_vars | {x})
        body = substitute(var, Var(renamed), body)
        var = renamed
    return type(e)(var, substitute(x, t, body))


# Alpha-equivalence


def canonical(e: Expr) -> Expr:
    """Rename every bound variable to '#k', k its binding depth; free variables stay."""
    return _canonical(e, {}, 0)


def _canonical(e: Expr, env: Dict[str, str], depth: int) -> Expr:
    if isinstance(e, Var):
        return Var(env.get(e.name, e.name))
    if isinstance(e, Apply):
        return Apply(e.function, tuple(_canonical(a, env, depth) for a in e.args))
    if isinstance(e, Falsum):
        return e
    if isinstance(e, PredApp):
        return PredApp(e.predicate, tuple(_canonical(a, env, depth) for a in e.args))
    if isinstance(e, Eq):
        return Eq(_canonical(e.left, env, depth), _canonical(e.right, env, depth))
    if isinstance(e, Not):
        return Not(_canonical(e.body, env, depth))
    if isinstance(e, (And, Or, Imp)):
        return type(e)(_canonical(e.left, env, depth), _canonical(e.right, env, depth))
    bound = f"#{depth}"
    return type(e)(bound, _canonical(e.body, {**env, e.var: bound}, depth + 1))


def alpha_equal(a: Expr, b: Expr) -> bool:
    return canonical(a) == canonical(b)


def context_key(formulas: Iterable[Formula]) -> FrozenSet[Formula]:
    """A hypothesis set as an alpha-equivalence-class set."""
    return frozenset(canonical(f) for f in formulas)


def make_sequent(hypotheses: Iterable[Formula], conclusion: Formula) -> Sequent:
    """Build a sequent, dropping hypotheses alpha-equal to an earlier one."""
    seen = set()
    kept: List[Formula] = []
    for h in hypotheses:
        key = canonical(h)
        if key not in seen:
            seen.add(key)
            kept.append(h)
    return Sequent(tuple(kept), conclusion)


def sequents_equal(a: Sequent, b: Sequent) -> bool:
    return context_key(a.hypotheses) == context_key(b.hypotheses) and alpha_equal(a.conclusion, b.conclusion)


# Fragments and symbols


def is_propositional(a: Formula) -> bool:
    if isinstance(a, Falsum):
        return True
    if isinstance(a, PredApp):
        return not a.args
    if isinstance(a, Not):
        return is_propositional(a.body)
    if isinstance(a, (And, Or, Imp)):
        return is_propositional(a.left) and is_propositional(a.right)
    return False


def atoms(a: Union[Formula, Iterable[Formula]]) -> List[str]:
    """Sorted names of the arity-0 predicates occurring in a formula or formulas."""
    sig = occurring_signature([a] if _is_formula(a) else a)
    return sorted(name for name, arity in sig.predicates.items() if arity == 0)


def _is_formula(a) -> bool:
    return isinstance(a, (Falsum, PredApp, Eq, Not, And, Or, Imp, Forall, Exists))


def occurs_equality(formulas: Iterable[Formula]) -> bool:
    return any(_has_eq(f) for f in formulas)


def _has_eq(a: Formula) -> bool:
    if isinstance(a, Eq):
        return True
    if isinstance(a, Not):
        return _has_eq(a.body)
    if isinstance(a, (And, Or, Imp)):
        return _has_eq(a.left) or _has_eq(a.right)
    if isinstance(a, (Forall, Exists)):
        return _has_eq(a.body)
    return False


def occurring_signature(formulas: Iterable[Formula]) -> Signature:
    """The symbols occurring in the formulas, with the arity they are used at."""
    functions: Dict[str, int] = {}
    predicates: Dict[str, int] = {}

    def note(table: Dict[str, int], name: str, arity: int):
        if table.setdefault(name, arity) != arity:
            raise SignatureError(f"symbol '{name}' used with arities {table[name]} and {arity}")

    def visit_term(t: Term):
        if isinstance(t, Apply):
            note(functions, t.function, len(t.args))
            for a in t.args:
                visit_term(a)

    def visit(a: Formula):
        if isinstance(a, PredApp):
            note(predicates, a.predicate, len(a.args))
            for t in a.args:
                visit_term(t)
        elif isinstance(a, Eq):
            visit_term(a.left)
            visit_term(a.right)
        elif isinstance(a, Not):
            visit(a.body)
        elif isinstance(a, (And, Or, Imp)):
            visit(a.left)
            visit(a.right)
        elif isinstance(a, (Forall, Exists)):
            visit(a.body)

    for f in formulas:
        visit(f)
    return Signature(functions, predicates)


def depth(a: Formula) -> int:
    """Nesting depth; atoms and falsum have depth 1."""
    if isinstance(a, Not):
        return 1 + depth(a.body)
    if isinstance(a, (And, Or, Imp)):
        return 1 + max(depth(a.left), depth(a.right))
    if isinstance(a, (Forall, Exists)):
        return 1 + depth(a.body)
    return 1


def is_identifier(name: str) -> bool:
    return bool(IDENTIFIER.match(name)) and name not in RESERVED_WORDS
