#!/usr/bin/env python3
"""
Command line entry point for the paraconsistent logic toolkit.

USAGE:
    python cli.py [global flags] <command> [arguments]

COMMANDS:
    parse TEXT                     - parse a formula or sequent and print it back
    eval FORMULA --structure FILE  - evaluate a formula in a structure file
    consequence PREMISES FORMULA   - bounded search for a counter-model
    equiv A1 A2                    - bounded search for a point where values differ
    consistent FORMULA             - bounded search for a point where the value is b
    check SCRIPT                   - check a proof script
    translate SEQUENT              - translate a sequent into classical logic
    census [--laws 1-13]           - count connective tables satisfying laws
    soundness-sweep                - bounded soundness check of every rule
    rules                          - list the rule catalog

GLOBAL FLAGS:
    --sig FILE_OR_TEXT   signature ("fun f/1; pred P/1"); inferred from use when absent
    --mode LP|Classical  --max-domain N  --budget N  --format text|json
    --equality identity|free  --log-level LEVEL

EXIT STATUS:
    0 ok, 1 parse or input error, 2 counter-model or check failure, 3 inconclusive
"""
import argparse
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from config import get_config
from errors import EmbeddingError, EvaluationError, LogicError, ParseError, SignatureError, StructureError
from models import CounterModel, Mode, Signature, Structure
from services import embedding, formats, metalab, proofsys, semantics
from services.report import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_PARSE,
    OUTPUT_FORMATS,
    check_record,
    render,
    table_rows,
    verdict_exit_code,
    verdict_record,
)
from services.syntax import FormulaParser, depth, format_formula, format_sequent, free_vars, is_identifier
from utils import set_log_level, setup_logger

logger = setup_logger(__name__)

Outcome = Tuple[int, Dict[str, Any]]


@dataclass
class RunConfig:
    """Settings for one invocation: flags override config, config overrides defaults."""

    command: str
    inputs: List[str] = field(default_factory=list)
    sig_path: Optional[str] = None
    mode: Mode = Mode.LP
    max_domain: int = 3
    budget: int = 2_000_000
    output_format: str = "text"
    equality: str = "identity"

    def validate(self):
        if self.max_domain < 1:
            raise ValueError(f"--max-domain must be at least 1, got {self.max_domain}")
        if self.budget < 1:
            raise ValueError(f"--budget must be at least 1, got {self.budget}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"--format must be one of {', '.join(OUTPUT_FORMATS)}, got '{self.output_format}'")
        if self.equality not in semantics.EQUALITY_POLICIES:
            raise ValueError(f"--equality must be one of {', '.join(semantics.EQUALITY_POLICIES)}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        settings = get_config()
        run = cls(
            command=args.command,
            inputs=[v for v in (getattr(args, name, None) for name in ("text", "first", "second")) if v is not None],
            sig_path=args.sig,
            mode=Mode.from_text(args.mode or settings.MODE),
            max_domain=settings.MAX_DOMAIN if args.max_domain is None else args.max_domain,
            budget=settings.SEARCH_BUDGET if args.budget is None else args.budget,
            output_format=args.format or settings.OUTPUT_FORMAT,
            equality=args.equality or settings.EQUALITY,
        )
        run.validate()
        return run


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors are input errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="lpf", description="Paraconsistent first-order logic toolkit")
    parser.add_argument("--sig", help="signature file or inline declarations")
    parser.add_argument("--mode", help="LP or Classical")
    parser.add_argument("--max-domain", type=int, dest="max_domain")
    parser.add_argument("--budget", type=int, help="maximum number of structure/assignment points")
    parser.add_argument("--format", choices=OUTPUT_FORMATS)
    parser.add_argument("--equality", choices=semantics.EQUALITY_POLICIES)
    parser.add_argument("--log-level", dest="log_level")
    commands = parser.add_subparsers(dest="command", required=True)

    parse = commands.add_parser("parse", help="parse a formula or sequent")
    parse.add_argument("text")

    evaluate = commands.add_parser("eval", help="evaluate a formula in a structure")
    evaluate.add_argument("text")
    evaluate.add_argument("--structure", required=True)
    evaluate.add_argument("--assign", default="", help="x=d1,y=d2")

    consequence = commands.add_parser("consequence", help="bounded consequence check")
    consequence.add_argument("first", metavar="premises", help="';'-separated formulas or a file, one per line")
    consequence.add_argument("second", metavar="conclusion")

    equiv = commands.add_parser("equiv", help="bounded equivalence check")
    equiv.add_argument("first", metavar="A1")
    equiv.add_argument("second", metavar="A2")

    consistent = commands.add_parser("consistent", help="bounded consistency check")
    consistent.add_argument("text")

    check = commands.add_parser("check", help="check a proof script")
    check.add_argument("text", metavar="script")
    check.add_argument("--target", help="sequent the last line must prove")

    translate = commands.add_parser("translate", help="translate a sequent into classical logic")
    translate.add_argument("text", metavar="sequent")

    census = commands.add_parser("census", help="count connective tables satisfying laws")
    census.add_argument("--laws", default="", help="e.g. 1-13, 1..10 or 1,5,11")

    sweep = commands.add_parser("soundness-sweep", help="bounded soundness check of the rules")
    sweep.add_argument("--classical", action="store_true", help="judge instances in two-valued structures only")
    sweep.add_argument("--rules", help="comma-separated rule ids; default: the catalog of --mode")

    commands.add_parser("rules", help="list the rule catalog")
    return parser


# Helpers


def _read(source: str) -> str:
    """A path to an existing file is read; anything else is taken as text."""
    if os.path.isfile(source):
        with open(source) as handle:
            return handle.read()
    return source


def _parser(run: RunConfig) -> FormulaParser:
    sig = formats.load_signature(run.sig_path)
    return FormulaParser(sig, infer=sig is None)


def _premises_text(source: str) -> str:
    if os.path.isfile(source):
        lines = [line.split("#", 1)[0].strip() for line in _read(source).splitlines()]
        return "; ".join(line for line in lines if line)
    return source


def _structure_signature(s: Structure) -> Signature:
    return Signature({n: s.arity(n) for n in s.functions}, {n: s.arity(n) for n in s.predicates})


def _assignment(text: str, s: Structure) -> Dict[str, str]:
    assignment = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, _, element = part.partition("=")
        name, element = name.strip(), element.strip()
        if not is_identifier(name):
            raise ParseError(f"bad variable name '{name}' in --assign")
        if element not in s.domain:
            raise ParseError(f"'{element}' is not a domain element")
        assignment[name] = element
    return assignment


# Commands


def cmd_parse(run: RunConfig) -> Outcome:
    parser = _parser(run)
    text = _read(run.inputs[0])
    if "|-" in text:
        sequent = parser.parse_sequent(text)
        return EXIT_OK, {"command": "parse", "sequent": format_sequent(sequent)}
    formula = parser.parse_formula(text)
    return EXIT_OK, {
        "command": "parse",
        "formula": format_formula(formula),
        "free_variables": sorted(free_vars(formula)),
        "depth": depth(formula),
    }


def cmd_eval(run: RunConfig, structure_path: str, assign: str) -> Outcome:
    sig = formats.load_signature(run.sig_path)
    s = formats.parse_structure(_read(structure_path), sig)
    formula = FormulaParser(sig or _structure_signature(s)).parse_formula(_read(run.inputs[0]))
    value = semantics.eval_formula(formula, s, _assignment(assign, s))
    return EXIT_OK, {"command": "eval", "formula": format_formula(formula), "value": str(value)}


def cmd_consequence(run: RunConfig) -> Outcome:
    parser = _parser(run)
    query = parser.parse_sequent(f"{_premises_text(run.inputs[0])} |- {_read(run.inputs[1])}")
    verdict = semantics.check_consequence(
        query.hypotheses,
        query.conclusion,
        run.max_domain,
        run.budget,
        classical=run.mode is Mode.CLASSICAL,
        equality=run.equality,
    )
    record = {"command": "consequence", "query": format_sequent(query), "equality": run.equality, **verdict_record(verdict)}
    return verdict_exit_code(verdict), record


def cmd_equiv(run: RunConfig) -> Outcome:
    parser = _parser(run)
    A1, A2 = (parser.parse_formula(_read(text)) for text in run.inputs[:2])
    verdict = semantics.check_equivalence(
        A1, A2, run.max_domain, run.budget, classical=run.mode is Mode.CLASSICAL, equality=run.equality
    )
    record = {
        "command": "equiv",
        "left": format_formula(A1),
        "right": format_formula(A2),
        "equality": run.equality,
        **verdict_record(verdict),
    }
    return verdict_exit_code(verdict), record


def cmd_consistent(run: RunConfig) -> Outcome:
    A = _parser(run).parse_formula(_read(run.inputs[0]))
    verdict = semantics.check_consistency(A, run.max_domain, run.budget, run.equality)
    record = {"command": "consistent", "formula": format_formula(A), "equality": run.equality, **verdict_record(verdict)}
    return verdict_exit_code(verdict), record


def cmd_check(run: RunConfig, target: Optional[str]) -> Outcome:
    sig = formats.load_signature(run.sig_path)
    script = formats.parse_proof_script(_read(run.inputs[0]), sig)
    goal = script.target
    if target is not None:
        goal = FormulaParser(script.signature, infer=sig is None).parse_sequent(target)
    result = proofsys.check_derivation(script.derivation, script.hypotheses, goal, run.mode)
    record = {"command": "check", "mode": run.mode.value, **check_record(result)}
    if not result.ok:
        logger.error(f"CHECK_FAILED: line {result.line}: {result.reason}")
    return (EXIT_OK if result.ok else EXIT_FAILED), record


def cmd_translate(run: RunConfig) -> Outcome:
    sequent = _parser(run).parse_sequent(_read(run.inputs[0]))
    axioms, premises, conclusion = embedding.translate_sequent_parts(sequent)
    return EXIT_OK, {
        "command": "translate",
        "axioms": [format_formula(a) for a in axioms],
        "premises": [format_formula(p) for p in premises],
        "conclusion": f"|- {format_formula(conclusion)}",
    }


def cmd_census(laws_text: str) -> Outcome:
    laws = metalab.parse_law_set(laws_text)
    result = metalab.count_candidates(laws)
    record: Dict[str, Any] = {"command": "census", "laws": [str(n) for n in result.laws], "count": result.count}
    if result.survivors:
        record["survivors"] = [table_rows(table) for table in result.survivors]
    return EXIT_OK, record


def cmd_soundness_sweep(run: RunConfig, classical: bool, rules: Optional[str]) -> Outcome:
    selected = rules.split(",") if rules else [r.id for r in proofsys.list_rules(run.mode)]
    unknown = [r for r in selected if r not in metalab.RULE_METAS]
    if unknown:
        raise ParseError(f"unknown rule id(s): {', '.join(unknown)}")
    reports = metalab.rule_soundness_sweep(classical, run.equality, selected)
    lines = []
    for r in reports:
        if r.passed:
            lines.append(f"{r.rule}: pass ({r.instances} instances)")
            continue
        structure, assignment = r.witness
        point = formats.format_countermodel(CounterModel(structure, tuple(sorted(assignment.items()))))
        lines.append(f"{r.rule}: FAIL {r.failures}/{r.instances}, first {r.first_failure} at {point}")
    record = {
        "command": "soundness-sweep",
        "semantics": "classical" if classical else "three-valued",
        "equality": run.equality,
        "rules": lines,
    }
    return (EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED), record


def cmd_rules(run: RunConfig) -> Outcome:
    rows = []
    for rule in proofsys.list_rules(run.mode):
        row = f"{rule.id:<9} {rule.premises}  {rule.schema}"
        if rule.params:
            row += f"   [needs {', '.join(rule.params)}]"
        if rule.side_condition:
            row += f"   [{rule.side_condition}]"
        if rule.two_way:
            row += "   [two-way]"
        rows.append(row)
    return EXIT_OK, {"command": "rules", "mode": run.mode.value, "rules": rows}


def dispatch(run: RunConfig, args: argparse.Namespace) -> Outcome:
    if run.command == "parse":
        return cmd_parse(run)
    if run.command == "eval":
        return cmd_eval(run, args.structure, args.assign)
    if run.command == "consequence":
        return cmd_consequence(run)
    if run.command == "equiv":
        return cmd_equiv(run)
    if run.command == "consistent":
        return cmd_consistent(run)
    if run.command == "check":
        return cmd_check(run, args.target)
    if run.command == "translate":
        return cmd_translate(run)
    if run.command == "census":
        return cmd_census(args.laws)
    if run.command == "soundness-sweep":
        return cmd_soundness_sweep(run, args.classical, args.rules)
    return cmd_rules(run)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    output_format = args.format or get_config().OUTPUT_FORMAT
    try:
        if args.log_level:
            set_log_level(args.log_level)
        run = RunConfig.from_args(args)
        output_format = run.output_format
        code, record = dispatch(run, args)
    except (ParseError, SignatureError, StructureError, EvaluationError, ValueError) as exc:
        logger.error(f"INPUT_ERROR: {exc}")
        code, record = EXIT_PARSE, {"command": args.command, "status": "error", "error": str(exc)}
    except (EmbeddingError, LogicError) as exc:
        logger.error(f"COMMAND_FAILED: {exc}")
        code, record = EXIT_FAILED, {"command": args.command, "status": "error", "error": str(exc)}
    if output_format not in OUTPUT_FORMATS:
        output_format = "text"
    sys.stdout.write(render(record, output_format))
    return code


if __name__ == "__main__":
    sys.exit(main())
