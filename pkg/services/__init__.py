from .syntax import (
    FormulaParser,
    alpha_equal,
    format_formula,
    format_sequent,
    free_vars,
    parse_formula,
    parse_sequent,
    parse_signature,
    parse_term,
    substitute,
)
from .semantics import (
    check_consequence,
    check_consistency,
    check_equivalence,
    enumerate_structures,
    eval_formula,
)
from .proofsys import check_derivation, check_step, expand_derived, is_proof, list_rules
from .embedding import (
    ax_set,
    star_structure,
    translate_formula,
    translate_sequent,
    translate_signature,
)
from .formats import parse_proof_script, parse_structure
from .report import render
from .metalab import (
    check_containment,
    check_internalization_consistency,
    check_internalization_equivalence,
    check_proper_connectives,
    count_candidates,
    enumerate_candidates,
    enumerate_formulas,
    rule_soundness_sweep,
    satisfies_law,
)

__all__ = [
    'FormulaParser',
    'alpha_equal',
    'format_formula',
    'format_sequent',
    'free_vars',
    'parse_formula',
    'parse_sequent',
    'parse_signature',
    'parse_term',
    'substitute',
    'check_consequence',
    'check_consistency',
    'check_equivalence',
    'enumerate_structures',
    'eval_formula',
    'check_derivation',
    'check_step',
    'expand_derived',
    'is_proof',
    'list_rules',
    'ax_set',
    'star_structure',
    'translate_formula',
    'translate_sequent',
    'translate_signature',
    'parse_proof_script',
    'parse_structure',
    'render',
    'check_containment',
    'check_internalization_consistency',
    'check_internalization_equivalence',
    'check_proper_connectives',
    'count_candidates',
    'enumerate_candidates',
    'enumerate_formulas',
    'rule_soundness_sweep',
    'satisfies_law',
]
