"""Natural deduction checking over sequents.

Every rule is described once by an ``instantiate`` function that builds the
premises and conclusion of an instance from its metavariables. Checking a
line recovers the metavariables from the line, its premises and the supplied
parameters, rebuilds the instance and compares the two up to alpha-equivalence
with hypothesis sets compared as sets.
"""
import re
from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from errors import ProofCheckError
from models import (
    FALSUM,
    TOP,
    And,
    CheckResult,
    Derivation,
    DerivationLine,
    Eq,
    Exists,
    Forall,
    Formula,
    Imp,
    LineVerdict,
    Mode,
    Not,
    Or,
    RuleApplication,
    Sequent,
    Var,
)
from services.syntax import (
    alpha_equal,
    context_key,
    format_formula,
    format_sequent,
    free_vars,
    make_sequent,
    sequents_equal,
    substitute,
)
from utils import setup_logger

logger = setup_logger(__name__)

Metas = Dict[str, object]
Instance = Tuple[List[Sequent], Sequent]


@dataclass(frozen=True)
class RuleSpec:
    id: str
    premises: int
    schema: str
    params: Tuple[str, ...] = ()
    side_condition: str = ""
    two_way: bool = False
    classical_only: bool = False


RULES: Tuple[RuleSpec, ...] = (
    RuleSpec("I", 0, "G, A |- A"),
    RuleSpec("EM", 0, "G |- A \\/ ~A"),
    RuleSpec("True-I", 0, "G |- ~F"),
    RuleSpec("Falsum-E", 1, "G |- F  /  G |- A"),
    RuleSpec("And-I", 2, "G |- A1   G |- A2  /  G |- A1 /\\ A2"),
    RuleSpec("And-E", 1, "G |- A1 /\\ A2  /  G |- Ai   (i = 1, 2)"),
    RuleSpec("Or-I", 1, "G |- Ai  /  G |- A1 \\/ A2   (i = 1, 2)"),
    RuleSpec("Or-E", 3, "G |- A1 \\/ A2   G, A1 |- A3   G, A2 |- A3  /  G |- A3"),
    RuleSpec("Imp-I", 1, "G, A1 |- A2  /  G |- A1 -> A2"),
    RuleSpec("Imp-E", 2, "G |- A1 -> A2   G |- A1  /  G |- A2"),
    RuleSpec("Forall-I", 1, "G |- A  /  G |- forall x. A", side_condition="x not free in G"),
    RuleSpec("Forall-E", 1, "G |- forall x. A  /  G |- A[x:=t]", params=("t",)),
    RuleSpec("Exists-I", 1, "G |- A[x:=t]  /  G |- exists x. A", params=("t",)),
    RuleSpec(
        "Exists-E",
        2,
        "G |- exists x. A1   G, A1 |- A2  /  G |- A2",
        side_condition="x not free in G or A2",
    ),
    RuleSpec("Eq-I", 0, "G |- t = t"),
    RuleSpec("Eq-E", 2, "G |- t1 = t2   G |- A[x:=t1]  /  G |- A[x:=t2]", params=("x", "A")),
    RuleSpec("Not-M", 1, "G |- ~~A  //  G |- A", two_way=True),
    RuleSpec("And-M", 1, "G |- ~(A1 /\\ A2)  //  G |- ~A1 \\/ ~A2", two_way=True),
    RuleSpec("Or-M", 1, "G |- ~(A1 \\/ A2)  //  G |- ~A1 /\\ ~A2", two_way=True),
    RuleSpec("Imp-M", 1, "G |- ~(A1 -> A2)  //  G |- A1 /\\ ~A2", two_way=True),
    RuleSpec("Forall-M", 1, "G |- ~(forall x. A)  //  G |- exists x. ~A", two_way=True),
    RuleSpec("Exists-M", 1, "G |- ~(exists x. A)  //  G |- forall x. ~A", two_way=True),
    RuleSpec("C", 2, "G |- A1   G |- ~A1  /  G |- A2", classical_only=True),
)

RULES_BY_ID: Dict[str, RuleSpec] = {rule.id: rule for rule in RULES}

RULE_ID = re.compile(r"(And-E|Or-I)-([12])\Z")


def list_rules(mode: Mode = Mode.LP) -> List[RuleSpec]:
    """The rule catalog; rule C only in classical mode. Two-way rules appear once."""
    return [rule for rule in RULES if mode is Mode.CLASSICAL or not rule.classical_only]


def split_rule_id(rule_id: str) -> Tuple[str, Optional[int]]:
    """'And-E-2' -> ('And-E', 2); other ids come back unchanged with no index."""
    match = RULE_ID.match(rule_id)
    if match:
        return match.group(1), int(match.group(2))
    return rule_id, None


# Two-way rules: the upper sequent's formula (top) and the lower one (bottom).


def _m_top(rule: str, m: Metas) -> Formula:
    if rule == "Not-M":
        return Not(Not(m["A"]))
    if rule == "And-M":
        return Not(And(m["A1"], m["A2"]))
    if rule == "Or-M":
        return Not(Or(m["A1"], m["A2"]))
    if rule == "Imp-M":
        return Not(Imp(m["A1"], m["A2"]))
    if rule == "Forall-M":
        return Not(Forall(m["x"], m["A"]))
    return Not(Exists(m["x"], m["A"]))


def _m_bottom(rule: str, m: Metas) -> Formula:
    if rule == "Not-M":
        return m["A"]
    if rule == "And-M":
        return Or(Not(m["A1"]), Not(m["A2"]))
    if rule == "Or-M":
        return And(Not(m["A1"]), Not(m["A2"]))
    if rule == "Imp-M":
        return And(m["A1"], Not(m["A2"]))
    if rule == "Forall-M":
        return Exists(m["x"], Not(m["A"]))
    return Forall(m["x"], Not(m["A"]))


def _m_metas_from_top(rule: str, top: Formula) -> Metas:
    if not isinstance(top, Not):
        raise ProofCheckError(f"{rule}: upper formula must be a negation")
    inner = top.body
    shapes = {"Not-M": Not, "And-M": And, "Or-M": Or, "Imp-M": Imp, "Forall-M": Forall, "Exists-M": Exists}
    if not isinstance(inner, shapes[rule]):
        raise ProofCheckError(f"{rule}: upper formula has the wrong shape: {format_formula(top)}")
    if rule == "Not-M":
        return {"A": inner.body}
    if rule in ("Forall-M", "Exists-M"):
        return {"x": inner.var, "A": inner.body}
    return {"A1": inner.left, "A2": inner.right}


def _m_metas_from_bottom(rule: str, bottom: Formula) -> Metas:
    def fail():
        return ProofCheckError(f"{rule}: lower formula has the wrong shape: {format_formula(bottom)}")

    if rule == "Not-M":
        return {"A": bottom}
    if rule in ("And-M", "Or-M"):
        if not isinstance(bottom, Or if rule == "And-M" else And):
            raise fail()
        if not (isinstance(bottom.left, Not) and isinstance(bottom.right, Not)):
            raise fail()
        return {"A1": bottom.left.body, "A2": bottom.right.body}
    if rule == "Imp-M":
        if not (isinstance(bottom, And) and isinstance(bottom.right, Not)):
            raise fail()
        return {"A1": bottom.left, "A2": bottom.right.body}
    if not isinstance(bottom, Exists if rule == "Forall-M" else Forall) or not isinstance(bottom.body, Not):
        raise fail()
    return {"x": bottom.var, "A": bottom.body.body}


# Instances


def _with(gamma: Sequence[Formula], *extra: Formula) -> Tuple[Formula, ...]:
    return tuple(gamma) + extra


def instantiate(rule_id: str, gamma: Sequence[Formula], m: Metas) -> Instance:
    """Premises and conclusion of the instance of a rule with context gamma and metavariables m.

    Metavariables: A, A1, A2, A3 (formulas), x (variable name), t, t1, t2 (terms),
    i (1 or 2 for And-E / Or-I) and dir ('down' or 'up' for two-way rules).
    Side conditions are not checked here; see ``side_condition_violation``.
    """
    def sq(formula: Formula, *extra: Formula) -> Sequent:
        return make_sequent(_with(gamma, *extra), formula)

    if rule_id == "I":
        return [], sq(m["A"], m["A"])
    if rule_id == "EM":
        return [], sq(Or(m["A"], Not(m["A"])))
    if rule_id == "True-I":
        return [], sq(TOP)
    if rule_id == "Falsum-E":
        return [sq(FALSUM)], sq(m["A"])
    if rule_id == "And-I":
        return [sq(m["A1"]), sq(m["A2"])], sq(And(m["A1"], m["A2"]))
    if rule_id == "And-E":
        return [sq(And(m["A1"], m["A2"]))], sq(m["A1"] if m.get("i", 1) == 1 else m["A2"])
    if rule_id == "Or-I":
        return [sq(m["A1"] if m.get("i", 1) == 1 else m["A2"])], sq(Or(m["A1"], m["A2"]))
    if rule_id == "Or-E":
        return (
            [sq(Or(m["A1"], m["A2"])), sq(m["A3"], m["A1"]), sq(m["A3"], m["A2"])],
            sq(m["A3"]),
        )
    if rule_id == "Imp-I":
        return [sq(m["A2"], m["A1"])], sq(Imp(m["A1"], m["A2"]))
    if rule_id == "Imp-E":
        return [sq(Imp(m["A1"], m["A2"])), sq(m["A1"])], sq(m["A2"])
    if rule_id == "Forall-I":
        return [sq(m["A"])], sq(Forall(m["x"], m["A"]))
    if rule_id == "Forall-E":
        return [sq(Forall(m["x"], m["A"]))], sq(substitute(m["x"], m["t"], m["A"]))
    if rule_id == "Exists-I":
        return [sq(substitute(m["x"], m["t"], m["A"]))], sq(Exists(m["x"], m["A"]))
    if rule_id == "Exists-E":
        return [sq(Exists(m["x"], m["A1"])), sq(m["A2"], m["A1"])], sq(m["A2"])
    if rule_id == "Eq-I":
        return [], sq(Eq(m["t"], m["t"]))
    if rule_id == "Eq-E":
        return (
            [sq(Eq(m["t1"], m["t2"])), sq(substitute(m["x"], m["t1"], m["A"]))],
            sq(substitute(m["x"], m["t2"], m["A"])),
        )
    if rule_id in TWO_WAY:
        top, bottom = sq(_m_top(rule_id, m)), sq(_m_bottom(rule_id, m))
        return ([top], bottom) if m.get("dir", "down") == "down" else ([bottom], top)
    if rule_id == "C":
        return [sq(m["A1"]), sq(Not(m["A1"]))], sq(m["A2"])
    raise ProofCheckError(f"unknown rule '{rule_id}'")


TWO_WAY = frozenset(rule.id for rule in RULES if rule.two_way)


def side_condition_violation(rule_id: str, gamma: Sequence[Formula], m: Metas) -> Optional[str]:
    if rule_id == "Forall-I":
        if m["x"] in free_vars(gamma):
            return f"side condition of Forall-I violated: {m['x']} is free in the hypotheses"
    elif rule_id == "Exists-E":
        if m["x"] in free_vars(gamma):
            return f"side condition of Exists-E violated: {m['x']} is free in the hypotheses"
        if m["x"] in free_vars(m["A2"]):
            return f"side condition of Exists-E violated: {m['x']} is free in {format_formula(m['A2'])}"
    return None


# Recovering metavariables from a line


SHAPE_NAMES = {
    And: "a conjunction",
    Or: "a disjunction",
    Imp: "an implication",
    Forall: "a universal formula",
    Exists: "an existential formula",
    Eq: "an equation",
}


def _expect(formula: Formula, kind, rule: str, what: str):
    if not isinstance(formula, kind):
        raise ProofCheckError(f"{rule}: {what} must be {SHAPE_NAMES[kind]}, got {format_formula(formula)}")
    return formula


def _rebind(quantified, var: Optional[str], rule: str) -> Tuple[str, Formula]:
    """The binder and body of a quantified formula, with the binder renamed to var when given."""
    if var is None or var == quantified.var:
        return quantified.var, quantified.body
    if var in free_vars(quantified):
        raise ProofCheckError(f"{rule}: cannot use x={var}, it is free in {format_formula(quantified)}")
    return var, substitute(quantified.var, Var(var), quantified.body)


def _recover(rule: str, line: Sequent, premises: Sequence[Sequent], app: RuleApplication) -> Metas:
    c = line.conclusion
    if rule in ("I", "Falsum-E"):
        return {"A": c}
    if rule == "EM":
        _expect(c, Or, rule, "the conclusion")
        return {"A": c.left}
    if rule == "True-I":
        return {}
    if rule == "And-I":
        _expect(c, And, rule, "the conclusion")
        return {"A1": c.left, "A2": c.right}
    if rule == "And-E":
        whole = _expect(premises[0].conclusion, And, rule, "the premise")
        index = app.index or (2 if alpha_equal(c, whole.right) and not alpha_equal(c, whole.left) else 1)
        return {"A1": whole.left, "A2": whole.right, "i": index}
    if rule == "Or-I":
        whole = _expect(c, Or, rule, "the conclusion")
        part = premises[0].conclusion
        index = app.index or (2 if alpha_equal(part, whole.right) and not alpha_equal(part, whole.left) else 1)
        return {"A1": whole.left, "A2": whole.right, "i": index}
    if rule == "Or-E":
        whole = _expect(premises[0].conclusion, Or, rule, "the first premise")
        return {"A1": whole.left, "A2": whole.right, "A3": c}
    if rule == "Imp-I":
        _expect(c, Imp, rule, "the conclusion")
        return {"A1": c.left, "A2": c.right}
    if rule == "Imp-E":
        whole = _expect(premises[0].conclusion, Imp, rule, "the first premise")
        return {"A1": whole.left, "A2": whole.right}
    if rule == "Forall-I":
        x, body = _rebind(_expect(c, Forall, rule, "the conclusion"), app.var, rule)
        return {"x": x, "A": body}
    if rule == "Forall-E":
        whole = _expect(premises[0].conclusion, Forall, rule, "the premise")
        return {"x": whole.var, "A": whole.body, "t": app.term}
    if rule == "Exists-I":
        _expect(c, Exists, rule, "the conclusion")
        return {"x": c.var, "A": c.body, "t": app.term}
    if rule == "Exists-E":
        x, body = _rebind(_expect(premises[0].conclusion, Exists, rule, "the first premise"), app.var, rule)
        return {"x": x, "A1": body, "A2": c}
    if rule == "Eq-I":
        _expect(c, Eq, rule, "the conclusion")
        return {"t": c.left}
    if rule == "Eq-E":
        eq = _expect(premises[0].conclusion, Eq, rule, "the first premise")
        return {"t1": eq.left, "t2": eq.right, "x": app.var, "A": app.template}
    if rule == "C":
        return {"A1": premises[0].conclusion, "A2": c}
    raise ProofCheckError(f"unknown rule '{rule}'")


def _missing_params(rule: RuleSpec, app: RuleApplication) -> List[str]:
    supplied = {"t": app.term, "x": app.var, "A": app.template}
    return [name for name in rule.params if supplied[name] is None]


def _compare(rule: str, line: Sequent, premises: Sequence[Sequent], instance: Instance) -> Optional[str]:
    expected_premises, expected = instance
    for k, (actual, wanted) in enumerate(zip(premises, expected_premises), start=1):
        if context_key(actual.hypotheses) != context_key(wanted.hypotheses):
            return f"{rule}: context mismatch in premise {k}, expected {format_sequent(wanted)}"
        if not alpha_equal(actual.conclusion, wanted.conclusion):
            return f"{rule}: premise {k} should be {format_sequent(wanted)}"
    if context_key(line.hypotheses) != context_key(expected.hypotheses):
        return f"{rule}: context mismatch in conclusion, expected {format_sequent(expected)}"
    if not alpha_equal(line.conclusion, expected.conclusion):
        return f"{rule}: conclusion should be {format_sequent(expected)}"
    return None


def check_step(
    line: Sequent,
    app: RuleApplication,
    earlier: Sequence[Sequent],
    mode: Mode = Mode.LP,
) -> Optional[str]:
    """Check one rule application. ``earlier`` holds the premise sequents in the order given.

    Returns None when the line is a correct instance, otherwise the reason.
    """
    rule_id, index = split_rule_id(app.rule)
    spec = RULES_BY_ID.get(rule_id)
    if spec is None:
        return f"unknown rule '{app.rule}'"
    if spec.classical_only and mode is not Mode.CLASSICAL:
        return f"rule {rule_id} requires classical mode"
    if len(earlier) != spec.premises:
        return f"rule {rule_id} takes {spec.premises} premise(s), got {len(earlier)}"
    missing = _missing_params(spec, app)
    if missing:
        return f"rule {rule_id} needs parameter(s) {', '.join(missing)}"
    if index is not None:
        app = replace(app, index=index)
    if spec.two_way and app.direction not in (None, "down", "up"):
        return f"direction must be 'down' or 'up', got '{app.direction}'"

    try:
        if spec.two_way:
            return _check_two_way(rule_id, line, earlier, app.direction)
        gamma = line.hypotheses
        metas = _recover(rule_id, line, earlier, app)
        violation = side_condition_violation(rule_id, gamma, metas)
        if violation:
            return violation
        return _compare(rule_id, line, earlier, instantiate(rule_id, gamma, metas))
    except ProofCheckError as exc:
        return exc.reason


def _check_two_way(rule_id: str, line: Sequent, earlier: Sequence[Sequent], direction: Optional[str]) -> Optional[str]:
    reasons = []
    for attempt in ([direction] if direction else ["down", "up"]):
        try:
            premise = earlier[0].conclusion
            metas = _m_metas_from_top(rule_id, premise) if attempt == "down" else _m_metas_from_bottom(rule_id, premise)
            metas["dir"] = attempt
            reason = _compare(rule_id, line, earlier, instantiate(rule_id, line.hypotheses, metas))
        except ProofCheckError as exc:
            reason = exc.reason
        if reason is None:
            return None
        reasons.append(reason)
    return reasons[0]


# Derived rules

# Each derived rule proves G |- X -> Y, where X // Y is a two-way rule read downward ('down')
# or upward ('up'), through I, the two-way rule and Imp-I.
DERIVED_RULES: Dict[str, Optional[str]] = {
    "Refl-Imp": None,
    "DoubleNeg": "Not-M",
    "DeMorgan-And": "And-M",
    "DeMorgan-Or": "Or-M",
    "DeMorgan-Imp": "Imp-M",
    "DeMorgan-Forall": "Forall-M",
    "DeMorgan-Exists": "Exists-M",
}


def _expand_line(line: DerivationLine, next_number: int) -> List[DerivationLine]:
    app = line.justification
    conclusion = line.sequent.conclusion
    gamma = line.sequent.hypotheses
    if not isinstance(conclusion, Imp):
        raise ProofCheckError(f"derived rule {app.rule} concludes an implication", line.number)
    antecedent, consequent = conclusion.left, conclusion.right
    assume = DerivationLine(
        next_number, make_sequent(gamma + (antecedent,), antecedent), RuleApplication("I")
    )
    lines = [assume]
    if DERIVED_RULES[app.rule] is not None:
        step = DerivationLine(
            next_number + 1,
            make_sequent(gamma + (antecedent,), consequent),
            RuleApplication(DERIVED_RULES[app.rule], (next_number,), app.direction or "down"),
        )
        lines.append(step)
    last = lines[-1].number
    lines.append(DerivationLine(last + 1, line.sequent, RuleApplication("Imp-I", (last,))))
    return lines


def expand_derived(d: Derivation) -> Tuple[Derivation, Dict[int, int]]:
    """Replace derived-rule lines by primitive steps.

    Lines are renumbered 1..n; the returned map sends each new number to the
    original line it came from.
    """
    lines: List[DerivationLine] = []
    origin: Dict[int, int] = {}
    renumber: Dict[int, int] = {}
    for line in d.lines:
        number = len(lines) + 1
        app = line.justification
        if app is not None and app.rule in DERIVED_RULES:
            block = _expand_line(line, number)
        else:
            if app is not None:
                premises = tuple(renumber.get(p, -p) for p in app.premises)
                app = replace(app, premises=premises)
            block = [DerivationLine(number, line.sequent, app)]
        for new in block:
            origin[new.number] = line.number
        lines.extend(block)
        renumber[line.number] = block[-1].number
    return Derivation(tuple(lines)), origin


def check_derivation(
    d: Derivation,
    hypotheses: Sequence[Sequent] = (),
    target: Optional[Sequent] = None,
    mode: Mode = Mode.LP,
) -> CheckResult:
    """Check every line; the result carries per-line verdicts and the first violation.

    A hypothesis line must be alpha-equal to a member of ``hypotheses``; any
    other line must be a correct rule instance whose premises are earlier lines.
    With a target the last line must equal it.
    """
    if not d.lines:
        return CheckResult(False, None, "empty derivation")
    numbers = [line.number for line in d.lines]
    if len(set(numbers)) != len(numbers):
        duplicate = next(n for n in numbers if numbers.count(n) > 1)
        return CheckResult(False, duplicate, f"line number {duplicate} used twice")

    try:
        expanded, origin = expand_derived(d)
    except ProofCheckError as exc:
        return CheckResult(False, exc.line, exc.reason)

    by_number: Dict[int, Sequent] = {}
    reasons: Dict[int, str] = {}
    for line in expanded.lines:
        reason = _check_line(line, by_number, hypotheses, mode)
        by_number[line.number] = line.sequent
        if reason and origin[line.number] not in reasons:
            reasons[origin[line.number]] = reason
            logger.debug(f"LINE_REJECTED: line {origin[line.number]}: {reason}")

    verdicts = tuple(LineVerdict(line.number, line.number not in reasons, reasons.get(line.number, "")) for line in d.lines)
    for line in d.lines:
        if line.number in reasons:
            logger.info(f"DERIVATION_REJECTED: line {line.number}: {reasons[line.number]}")
            return CheckResult(False, line.number, reasons[line.number], verdicts)
    if target is not None and not sequents_equal(d.lines[-1].sequent, target):
        reason = f"last line is {format_sequent(d.lines[-1].sequent)}, expected {format_sequent(target)}"
        logger.info(f"DERIVATION_REJECTED: {reason}")
        return CheckResult(False, d.lines[-1].number, reason, verdicts)
    logger.info(f"DERIVATION_ACCEPTED: {len(d.lines)} line(s) in {mode.value} mode")
    return CheckResult(True, None, "", verdicts)


def _check_line(
    line: DerivationLine,
    by_number: Mapping[int, Sequent],
    hypotheses: Sequence[Sequent],
    mode: Mode,
) -> Optional[str]:
    if line.is_hypothesis:
        if any(sequents_equal(line.sequent, h) for h in hypotheses):
            return None
        return "not among the hypothesis sequents"
    premises = []
    for ref in line.justification.premises:
        if ref < 0:
            return f"premise {-ref} does not refer to an earlier line"
        premises.append(by_number[ref])
    return check_step(line.sequent, line.justification, premises, mode)


def is_proof(d: Derivation, target: Sequent, mode: Mode = Mode.LP) -> bool:
    return check_derivation(d, (), target, mode).ok
