#!/usr/bin/env python3
"""
Tests for structure files, signatures and proof scripts.
"""

from pathlib import Path

import pytest

from errors import ParseError, SignatureError, StructureError
from models import And, Apply, CounterModel, PredApp, Signature, TruthValue, Var
from services.formats import (
    format_countermodel,
    format_structure,
    load_signature,
    parse_proof_script,
    parse_structure,
)

CORPUS = Path(__file__).parent.parent / "corpus"
T, F, B = TruthValue.T, TruthValue.F, TruthValue.B

STRUCTURE_TEXT = """domain d1 d2
fun c: () -> d1
pred P: (d1) -> b
pred P: (d2) -> f
eq: (d1,d2) -> b
"""


class TestStructureFiles:
    """Reading and writing structures."""

    def test_corpus_structure(self):
        """The glut structure from the corpus, checked against its signature."""
        sig = load_signature(str(CORPUS / "signatures" / "unary.sig"))
        s = parse_structure((CORPUS / "structures" / "glut.struct").read_text(), sig)
        assert s.domain == ("d1", "d2")
        assert s.functions == {"c": {(): "d1"}}
        assert s.predicates == {"P": {("d1",): B, ("d2",): F}}

    def test_equality_defaults_to_identity(self):
        """Unlisted equality cells follow the identity relation."""
        s = parse_structure(STRUCTURE_TEXT)
        assert s.equality[("d1", "d2")] is B
        assert s.equality[("d2", "d1")] is F
        assert s.equality[("d2", "d2")] is T

    def test_format_writes_back_the_same_text(self):
        """Only non-identity equality rows are written."""
        assert format_structure(parse_structure(STRUCTURE_TEXT)) == STRUCTURE_TEXT

    def test_comments_and_blank_lines(self):
        """# starts a comment anywhere on a row."""
        s = parse_structure("# header\n\ndomain d1   # one element\npred p: () -> t\n")
        assert s.predicates == {"p": {(): T}}

    def test_domain_comes_first(self):
        """Rows before the domain are rejected."""
        with pytest.raises(ParseError) as excinfo:
            parse_structure("pred p: () -> t\ndomain d1\n")
        assert excinfo.value.line == 1
        assert "domain must be declared first" in str(excinfo.value)

    def test_missing_domain(self):
        """A structure file needs a domain row."""
        with pytest.raises(ParseError, match="missing domain"):
            parse_structure("# nothing here\n")

    def test_malformed_row(self):
        """Grammar errors carry the row number."""
        with pytest.raises(ParseError) as excinfo:
            parse_structure("domain d1\npred P: (d1) => t\n")
        assert excinfo.value.line == 2
        assert "bad predicate row" in str(excinfo.value)

    def test_unknown_element(self):
        """Arguments and values must be domain elements."""
        with pytest.raises(ParseError, match="'d3' is not a domain element"):
            parse_structure("domain d1 d2\nfun c: () -> d3\n")

    def test_unknown_row_kind(self):
        """Only domain, fun, pred and eq rows exist."""
        with pytest.raises(ParseError, match="unknown row kind 'rel'"):
            parse_structure("domain d1\nrel R: (d1) -> t\n")

    def test_partial_table(self):
        """Every listed symbol needs a total table."""
        with pytest.raises(StructureError, match="not total"):
            parse_structure("domain d1 d2\npred P: (d1) -> t\n")

    def test_false_diagonal(self):
        """The equality diagonal cannot be f."""
        with pytest.raises(StructureError, match="diagonal"):
            parse_structure("domain d1\neq: (d1,d1) -> f\n")

    def test_arity_against_signature(self):
        """With a signature, row arities must match it."""
        sig = Signature(predicates={"P": 2})
        with pytest.raises(SignatureError, match="has arity 2, row gives 1"):
            parse_structure("domain d1\npred P: (d1) -> t\n", sig)

    def test_symbol_missing_from_signature(self):
        """With a signature, every symbol must be declared."""
        with pytest.raises(SignatureError, match="not in the signature"):
            parse_structure("domain d1\npred Q: (d1) -> t\n", Signature(predicates={"P": 1}))


class TestCounterModelText:
    """The one-line counter-model format."""

    def test_first_order(self):
        """Assignment, function cells, predicate cells and non-identity equality cells."""
        s = parse_structure(STRUCTURE_TEXT)
        assert format_countermodel(CounterModel(s, (("x", "d1"),))) == "x=d1 c=d1 P(d1)=b P(d2)=f d1=d2:b"

    def test_propositional(self):
        """Arity-0 predicates print without parentheses."""
        s = parse_structure("domain d1\npred p: () -> b\npred q: () -> f\n")
        assert format_countermodel(CounterModel(s, ())) == "p=b q=f"


class TestSignatures:
    """--sig takes a file or inline declarations."""

    def test_from_file(self):
        """A path is read as a signature file."""
        sig = load_signature(str(CORPUS / "signatures" / "unary.sig"))
        assert sig == Signature(functions={"c": 0}, predicates={"P": 1})

    def test_inline(self):
        """Text that is not a readable path is parsed directly."""
        assert load_signature("pred R/2; fun f/1") == Signature(functions={"f": 1}, predicates={"R": 2})

    def test_absent(self):
        """No source, no signature."""
        assert load_signature(None) is None


class TestProofScripts:
    """Parsing proof scripts."""

    def test_corpus_script(self):
        """Target, lines, rules and premises; symbols are inferred."""
        script = parse_proof_script((CORPUS / "proofs" / "imp_refl.proof").read_text())
        assert [line.number for line in script.derivation.lines] == [1, 2]
        assert script.target is not None
        assert script.derivation.lines[1].justification.rule == "Imp-I"
        assert script.derivation.lines[1].justification.premises == (1,)
        assert script.signature.predicates == {"p": 0}

    def test_hypotheses(self):
        """hyp: directives collect hypothesis sequents; rule=hyp marks a hypothesis line."""
        script = parse_proof_script("hyp: p |- q\nhyp: |- r\n1. p |- q ; rule=hyp\n")
        assert len(script.hypotheses) == 2
        assert script.derivation.lines[0].is_hypothesis

    def test_parameters(self):
        """dir, x and t parameters reach the rule application."""
        sig = Signature(functions={"c": 0}, predicates={"P": 1})
        text = "1. |- forall x. P(x) ; rule=I\n2. |- P(c) ; rule=Forall-E from=1 t=c x=y dir=up\n"
        app = parse_proof_script(text, sig).derivation.lines[1].justification
        assert (app.term, app.var, app.direction) == (Apply("c"), "y", "up")

    def test_template_takes_the_rest_of_the_line(self):
        """A= may contain spaces and comes last."""
        text = "1. x = y; P(x) |- P(y) ; rule=Eq-E from=1,2 x=z A=P(z) /\\ P(z)\n"
        app = parse_proof_script(text).derivation.lines[0].justification
        z = PredApp("P", (Var("z"),))
        assert app.template == And(z, z)
        assert app.premises == (1, 2)
        assert app.var == "z"

    def test_missing_rule(self):
        """Every line needs '; rule=<id>'."""
        with pytest.raises(ParseError) as excinfo:
            parse_proof_script("1. p |- p\n")
        assert excinfo.value.line == 1
        assert "rule=<id>" in str(excinfo.value)

    def test_missing_line_number(self):
        """Lines start with a number and a dot."""
        with pytest.raises(ParseError, match="line number"):
            parse_proof_script("p |- p ; rule=I\n")

    def test_unknown_parameter(self):
        """Only dir, from, x, t and A are parameters."""
        with pytest.raises(ParseError, match="unknown parameter 'via=2'"):
            parse_proof_script("1. p |- p ; rule=I via=2\n")

    def test_bad_premise_list(self):
        """from= takes comma-separated line numbers."""
        with pytest.raises(ParseError, match="bad premise list 'one'"):
            parse_proof_script("1. p |- p ; rule=I from=one\n")

    def test_empty_rule_id(self):
        """rule= with nothing after it is reported at the end of the separator."""
        with pytest.raises(ParseError, match="expected a rule id") as excinfo:
            parse_proof_script("1. p |- p ; rule=\n")
        assert (excinfo.value.line, excinfo.value.column) == (1, 18)

    def test_bound_variable_must_be_an_identifier(self):
        """x= names a variable; the column points at its value."""
        with pytest.raises(ParseError, match="'1y' is not a variable name") as excinfo:
            parse_proof_script("1. |- c = c ; rule=Eq-E from=1,2 x=1y A=P(x)\n")
        assert (excinfo.value.line, excinfo.value.column) == (1, 36)

    def test_bound_variable_may_not_be_a_keyword(self):
        """Reserved words are not variables."""
        with pytest.raises(ParseError, match="'forall' is not a variable name"):
            parse_proof_script("1. p |- p ; rule=Forall-I from=1 x=forall\n")

    def test_hypothesis_line_takes_no_parameters(self):
        """rule=hyp stands alone."""
        with pytest.raises(ParseError, match="no parameters"):
            parse_proof_script("1. p |- p ; rule=hyp from=1\n")

    def test_formula_errors_point_into_the_line(self):
        """Errors inside a sequent are reported at the script line and column."""
        with pytest.raises(ParseError) as excinfo:
            parse_proof_script("# comment\n1. p |- p ; rule=I\n2. p |- /\\ q ; rule=I\n")
        assert excinfo.value.line == 3
        assert excinfo.value.column > 3

    def test_signature_is_enforced(self):
        """With a signature, undeclared symbols are errors."""
        with pytest.raises(ParseError, match="unknown predicate symbol 'q'"):
            parse_proof_script("1. q |- q ; rule=I\n", Signature(predicates={"p": 0}))

    def test_empty_script(self):
        """A script needs at least one derivation line."""
        with pytest.raises(ParseError, match="no derivation lines"):
            parse_proof_script("target: |- p\n")
