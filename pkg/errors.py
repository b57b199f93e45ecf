from typing import Optional


class LogicError(Exception):
    """Base class for every error raised by the toolkit."""


class ParseError(LogicError):
    """Lexical or grammatical error in formula, signature, structure or proof text."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None and column is not None:
            super().__init__(f"{line}:{column}: {message}")
        else:
            super().__init__(message)


class SignatureError(LogicError):
    """Ill-formed signature (duplicate or reserved names, negative arity)."""


class StructureError(LogicError):
    """Ill-formed structure (empty domain, partial table, bad equality diagonal)."""


class EvaluationError(LogicError):
    """Unassigned variable or uninterpreted symbol during evaluation."""


class EmbeddingError(LogicError):
    """Name-mangling collision while building the translated signature."""


class ProofCheckError(LogicError):
    """A derivation step violates its rule. Raised inside the checker, reported as a CheckResult."""

    def __init__(self, reason: str, line: Optional[int] = None):
        self.reason = reason
        self.line = line
        super().__init__(f"line {line}: {reason}" if line is not None else reason)
