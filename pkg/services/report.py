"""One record per command, rendered either as text or as JSON.

Records are plain dicts of strings, numbers, lists and dicts so that both
renderings come from the same data.
"""
import json
from typing import Any, Dict, List

from models import (
    TRUTH_VALUES,
    CheckResult,
    ConnectiveTable,
    CounterModel,
    Inconclusive,
    NoCounterModelUpTo,
    Verdict,
)
from services.formats import format_countermodel, format_structure

OUTPUT_FORMATS = ("text", "json")

# Exit codes
EXIT_OK = 0
EXIT_PARSE = 1
EXIT_FAILED = 2
EXIT_INCONCLUSIVE = 3


def verdict_record(verdict: Verdict) -> Dict[str, Any]:
    if isinstance(verdict, CounterModel):
        return {
            "status": "counter-model",
            "domain_size": len(verdict.structure.domain),
            "counter_model": format_countermodel(verdict),
            "structure": format_structure(verdict.structure).splitlines(),
            "values": [str(v) for v in verdict.values],
        }
    if isinstance(verdict, NoCounterModelUpTo):
        return {"status": "no-counter-model", "max_domain": verdict.bound}
    return {"status": "inconclusive", "searched_up_to": verdict.searched_up_to, "budget": verdict.budget}


def verdict_exit_code(verdict: Verdict) -> int:
    if isinstance(verdict, Inconclusive):
        return EXIT_INCONCLUSIVE
    return EXIT_OK if isinstance(verdict, NoCounterModelUpTo) else EXIT_FAILED


def check_record(result: CheckResult) -> Dict[str, Any]:
    record: Dict[str, Any] = {"status": "ok" if result.ok else "rejected"}
    if not result.ok:
        record["line"] = result.line
        record["reason"] = result.reason
    record["lines"] = [
        f"{v.number}: ok" if v.ok else f"{v.number}: {v.reason}" for v in result.verdicts
    ]
    return record


def table_rows(table: ConnectiveTable) -> List[str]:
    """Fixed-width rows: arguments and results in the order t, f, b."""
    header = "   ".join(str(v) for v in TRUTH_VALUES)
    rows = [f"neg    {header}", "       " + "   ".join(str(table.neg[v]) for v in TRUTH_VALUES)]
    for name, cells in (("and", table.conj), ("or", table.disj), ("imp", table.impl)):
        rows.append(f"{name:<7}{header}")
        for v in TRUTH_VALUES:
            rows.append(f"  {v}    " + "   ".join(str(cells[(v, w)]) for w in TRUTH_VALUES))
    return rows


def _text_lines(record: Dict[str, Any], indent: str = "") -> List[str]:
    lines: List[str] = []
    for key, value in record.items():
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines += _text_lines(value, indent + "  ")
        elif isinstance(value, list):
            lines.append(f"{indent}{key}:")
            for item in value:
                if isinstance(item, dict):
                    lines += _text_lines(item, indent + "  ")
                elif isinstance(item, list):
                    lines += [f"{indent}  {row}" for row in item]
                    lines.append("")
                else:
                    lines.append(f"{indent}  {item}")
        elif value is not None:
            lines.append(f"{indent}{key}: {value}")
    return lines


def render(record: Dict[str, Any], fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(record, indent=2, sort_keys=True) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown output format '{fmt}' (expected one of {OUTPUT_FORMATS})")
    return "\n".join(_text_lines(record)).rstrip("\n") + "\n"
