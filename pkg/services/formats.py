"""Readers and writers for the text files the command line works with.

Structure files::

    domain d1 d2
    fun c: () -> d1
    fun f: (d1) -> d2
    pred P: (d2) -> b
    eq: (d1,d2) -> b

Equality cells that are not listed follow the identity relation.

Proof scripts, one line per derivation line::

    hyp: p |- q                     (a hypothesis sequent, optional)
    target: |- p -> p               (optional)
    1. p |- p ; rule=I
    2. |- p -> p ; rule=Imp-I from=1
    3. ... ; rule=Eq-E from=1,2 x=x A=P(x)

``rule=hyp`` marks a hypothesis line. ``A=`` must come last and takes the
rest of the line.
"""
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import parsy
from parsy import eof, regex, seq

from errors import ParseError, SignatureError
from models import (
    CounterModel,
    Derivation,
    DerivationLine,
    RuleApplication,
    Sequent,
    Signature,
    Structure,
    TruthValue,
    identity_equality,
)
from services.syntax import (
    FormulaParser,
    comma,
    is_identifier,
    lexeme,
    lparen,
    name_token,
    parse_signature,
    rparen,
    token,
    whitespace,
)
from utils import setup_logger

logger = setup_logger(__name__)

# Structure files

element = lexeme(regex(r"[A-Za-z0-9_]+"))
arguments = lparen >> element.sep_by(comma) << rparen
truth_value = lexeme(regex(r"[tfbTFB]")).map(TruthValue.from_text)

domain_row = token("domain") >> element.at_least(1)
fun_row = seq(token("fun") >> name_token << token(":"), arguments, token("->") >> element)
pred_row = seq(token("pred") >> name_token << token(":"), arguments, token("->") >> truth_value)
eq_row = seq(token("eq") >> token(":") >> arguments, token("->") >> truth_value)


def _row(parser: parsy.Parser, text: str, number: int, what: str):
    try:
        return (whitespace >> parser << eof).parse(text)
    except parsy.ParseError as exc:
        column = parsy.line_info_at(exc.stream, exc.index)[1] + 1
        raise ParseError(f"bad {what} row, expected {', '.join(sorted(exc.expected))}", number, column) from None


def parse_structure(text: str, sig: Optional[Signature] = None) -> Structure:
    """Read a structure file. With a signature, arities are checked against it."""
    domain: Optional[Tuple[str, ...]] = None
    functions: Dict[str, Dict[Tuple[str, ...], str]] = {}
    predicates: Dict[str, Dict[Tuple[str, ...], TruthValue]] = {}
    equality: Dict[Tuple[str, str], TruthValue] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword = line.split(None, 1)[0].rstrip(":")
        if keyword == "domain":
            if domain is not None:
                raise ParseError("domain declared twice", number, 1)
            domain = tuple(_row(domain_row, line, number, "domain"))
            continue
        if domain is None:
            raise ParseError("the domain must be declared first", number, 1)
        if keyword == "fun":
            name, args, value = _row(fun_row, line, number, "function")
            _check_elements(domain, list(args) + [value], number)
            _check_arity(sig, name, len(args), number, functions=True)
            functions.setdefault(name, {})[tuple(args)] = value
        elif keyword == "pred":
            name, args, value = _row(pred_row, line, number, "predicate")
            _check_elements(domain, args, number)
            _check_arity(sig, name, len(args), number, functions=False)
            predicates.setdefault(name, {})[tuple(args)] = value
        elif keyword == "eq":
            args, value = _row(eq_row, line, number, "equality")
            if len(args) != 2:
                raise ParseError(f"equality takes 2 arguments, got {len(args)}", number, 1)
            _check_elements(domain, args, number)
            equality[tuple(args)] = value
        else:
            raise ParseError(f"unknown row kind '{keyword}'", number, 1)

    if domain is None:
        raise ParseError("missing domain declaration", 1, 1)
    table = identity_equality(domain)
    table.update(equality)
    structure = Structure(domain, functions, predicates, table)
    logger.debug(f"STRUCTURE_LOADED: {len(domain)} element(s), {len(functions)} function(s), {len(predicates)} predicate(s)")
    return structure


def _check_elements(domain: Tuple[str, ...], elements, number: int):
    for e in elements:
        if e not in domain:
            raise ParseError(f"'{e}' is not a domain element", number, 1)


def _check_arity(sig: Optional[Signature], name: str, arity: int, number: int, functions: bool):
    if sig is None:
        return
    table = sig.functions if functions else sig.predicates
    kind = "function" if functions else "predicate"
    if name not in table:
        raise SignatureError(f"line {number}: {kind} '{name}' is not in the signature")
    if table[name] != arity:
        raise SignatureError(f"line {number}: {kind} '{name}' has arity {table[name]}, row gives {arity}")


def format_structure(s: Structure) -> str:
    """Structure file text; equality rows only where they differ from identity."""
    rows = ["domain " + " ".join(s.domain)]
    for name in sorted(s.functions):
        for args, value in s.functions[name].items():
            rows.append(f"fun {name}: ({','.join(args)}) -> {value}")
    for name in sorted(s.predicates):
        for args, value in s.predicates[name].items():
            rows.append(f"pred {name}: ({','.join(args)}) -> {value}")
    identity = identity_equality(s.domain)
    for args, value in s.equality.items():
        if value is not identity[args]:
            rows.append(f"eq: ({','.join(args)}) -> {value}")
    return "\n".join(rows) + "\n"


def format_countermodel(cm: CounterModel) -> str:
    """One line: assignment, function cells, predicate cells, non-identity equality cells.

    A propositional counter-model prints as ``p=b q=f``.
    """
    s = cm.structure
    parts = [f"{x}={d}" for x, d in cm.assignment]

    def call(name: str, args: Tuple[str, ...]) -> str:
        return f"{name}({','.join(args)})" if args else name

    for name in sorted(s.functions):
        parts += [f"{call(name, args)}={value}" for args, value in s.functions[name].items()]
    for name in sorted(s.predicates):
        parts += [f"{call(name, args)}={value}" for args, value in s.predicates[name].items()]
    identity = identity_equality(s.domain)
    parts += [f"{d}={e}:{value}" for (d, e), value in s.equality.items() if value is not identity[(d, e)]]
    return " ".join(parts)


# Signatures


def load_signature(source: Optional[str]) -> Optional[Signature]:
    """--sig accepts a path to a signature file or inline declarations."""
    if source is None:
        return None
    try:
        with open(source) as handle:
            text = handle.read()
    except OSError:
        text = source
    return parse_signature(text)


# Proof scripts

LINE_NUMBER = re.compile(r"\s*(\d+)\s*\.\s*")
RULE_SEPARATOR = re.compile(r";\s*rule=")
PARAM = re.compile(r"(dir|from|x|t)=(\S+)")


@dataclass
class ProofScript:
    derivation: Derivation
    hypotheses: List[Sequent] = field(default_factory=list)
    target: Optional[Sequent] = None
    signature: Signature = field(default_factory=Signature)


def _shifted(exc: ParseError, number: int, offset: int) -> ParseError:
    return ParseError(exc.message, number, (exc.column or 1) + offset)


def parse_proof_script(text: str, sig: Optional[Signature] = None) -> ProofScript:
    """Parse a proof script. Without a signature, symbols are inferred from use."""
    parser = FormulaParser(sig, infer=sig is None)
    lines: List[DerivationLine] = []
    hypotheses: List[Sequent] = []
    target: Optional[Sequent] = None

    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.split("#", 1)[0].strip():
            continue
        directive = re.match(r"\s*(hyp|target)\s*:", raw)
        if directive:
            try:
                sequent = parser.parse_sequent(raw[directive.end():])
            except ParseError as exc:
                raise _shifted(exc, number, directive.end()) from None
            if directive.group(1) == "hyp":
                hypotheses.append(sequent)
            else:
                target = sequent
            continue
        lines.append(_parse_line(parser, raw, number))

    if not lines:
        raise ParseError("the script has no derivation lines", 1, 1)
    logger.debug(f"SCRIPT_PARSED: {len(lines)} line(s), {len(hypotheses)} hypothesis sequent(s)")
    return ProofScript(Derivation(tuple(lines)), hypotheses, target, parser.signature)


def _parse_line(parser: FormulaParser, raw: str, number: int) -> DerivationLine:
    head = LINE_NUMBER.match(raw)
    if not head:
        raise ParseError("expected a line number like '3.'", number, 1)
    separator = RULE_SEPARATOR.search(raw, head.end())
    if not separator:
        raise ParseError("expected '; rule=<id>' after the sequent", number, len(raw) + 1)
    try:
        sequent = parser.parse_sequent(raw[head.end():separator.start()])
    except ParseError as exc:
        raise _shifted(exc, number, head.end()) from None

    justification = raw[separator.end():]
    template = None
    template_at = re.search(r"(^|\s)A=", justification)
    if template_at:
        offset = separator.end() + template_at.end()
        try:
            template = parser.parse_formula(justification[template_at.end():])
        except ParseError as exc:
            raise _shifted(exc, number, offset) from None
        justification = justification[: template_at.start()]

    if not justification.split():
        raise ParseError("expected a rule id after 'rule='", number, separator.end() + 1)
    rule, *params = justification.split()
    if rule == "hyp":
        if params or template is not None:
            raise ParseError("a hypothesis line takes no parameters", number, separator.end() + 1)
        return DerivationLine(int(head.group(1)), sequent, None)

    found: Dict[str, str] = {}
    for param in params:
        match = PARAM.fullmatch(param)
        if not match:
            raise ParseError(f"unknown parameter '{param}'", number, raw.find(param) + 1)
        found[match.group(1)] = match.group(2)
    if "x" in found and not is_identifier(found["x"]):
        at = re.search(r"(^|\s)x=", justification)
        column = separator.end() + (at.end() if at else 0) + 1
        raise ParseError(f"'{found['x']}' is not a variable name", number, column)
    try:
        premises = tuple(int(p) for p in found["from"].split(",")) if "from" in found else ()
    except ValueError:
        raise ParseError(f"bad premise list '{found['from']}'", number, raw.find("from=") + 1) from None
    term = None
    if "t" in found:
        try:
            term = parser.parse_term(found["t"])
        except ParseError as exc:
            raise _shifted(exc, number, raw.find("t=") + 2) from None
    return DerivationLine(
        int(head.group(1)),
        sequent,
        RuleApplication(rule, premises, found.get("dir"), None, found.get("x"), term, template),
    )
