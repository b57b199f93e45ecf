import itertools
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, Optional, Tuple, Union

from errors import SignatureError, StructureError

IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*'*\Z")

# Words the concrete syntax reserves; they can never name a symbol.
RESERVED_WORDS = frozenset({"forall", "exists", "F", "T"})


class TruthValue(Enum):
    """The three truth values. Definition order T, F, B is the canonical enumeration order."""

    T = "t"
    F = "f"
    B = "b"

    @property
    def designated(self) -> bool:
        return self is not TruthValue.F

    @property
    def rank(self) -> int:
        """Position in the truth order F < B < T."""
        return _RANK[self]

    @classmethod
    def from_text(cls, text: str) -> "TruthValue":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown truth value '{text}' (expected t, f or b)") from None

    def __str__(self) -> str:
        return self.value


_RANK = {TruthValue.F: 0, TruthValue.B: 1, TruthValue.T: 2}

TRUTH_VALUES: Tuple[TruthValue, ...] = tuple(TruthValue)
CLASSICAL_VALUES: Tuple[TruthValue, ...] = (TruthValue.T, TruthValue.F)


@dataclass(frozen=True)
class Signature:
    """Function and predicate symbols with their arities."""

    functions: Dict[str, int] = field(default_factory=dict)
    predicates: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for kind, table in (("function", self.functions), ("predicate", self.predicates)):
            for name, arity in table.items():
                if not IDENTIFIER.match(name) or name in RESERVED_WORDS:
                    raise SignatureError(f"invalid {kind} symbol name '{name}'")
                if not isinstance(arity, int) or arity < 0:
                    raise SignatureError(f"{kind} symbol '{name}' has invalid arity {arity!r}")
        clash = set(self.functions) & set(self.predicates)
        if clash:
            raise SignatureError(f"symbol names used twice: {', '.join(sorted(clash))}")

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.functions.items())), tuple(sorted(self.predicates.items()))))

    def __contains__(self, name: str) -> bool:
        return name in self.functions or name in self.predicates

    def merge(self, other: "Signature") -> "Signature":
        return Signature({**self.functions, **other.functions}, {**self.predicates, **other.predicates})


# Terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Apply:
    function: str
    args: Tuple["Term", ...] = ()


Term = Union[Var, Apply]


# Formulas


@dataclass(frozen=True)
class Falsum:
    pass


@dataclass(frozen=True)
class PredApp:
    predicate: str
    args: Tuple[Term, ...] = ()


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Falsum, PredApp, Eq, Not, And, Or, Imp, Forall, Exists]
BINARY = (And, Or, Imp)
QUANTIFIERS = (Forall, Exists)

FALSUM = Falsum()
TOP = Not(FALSUM)


def Iff(left: Formula, right: Formula) -> Formula:
    """A <-> B abbreviates (A -> B) /\\ (B -> A)."""
    return And(Imp(left, right), Imp(right, left))


# Structures

Assignment = Dict[str, str]


@dataclass(frozen=True)
class Structure:
    """A finite three-valued interpretation.

    Tables are keyed by argument tuples; arity-0 symbols use the key ().
    """

    domain: Tuple[str, ...]
    functions: Dict[str, Dict[Tuple[str, ...], str]] = field(default_factory=dict)
    predicates: Dict[str, Dict[Tuple[str, ...], TruthValue]] = field(default_factory=dict)
    equality: Dict[Tuple[str, str], TruthValue] = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain:
            raise StructureError("domain must be non-empty")
        if len(set(self.domain)) != len(self.domain):
            raise StructureError("domain elements must be distinct")
        members = set(self.domain)
        for name, table in self.functions.items():
            self._check_total(name, table)
            for key, value in table.items():
                if value not in members:
                    raise StructureError(f"function '{name}' maps {key} outside the domain: {value}")
        for name, table in self.predicates.items():
            self._check_total(name, table)
        if set(self.equality) != set(itertools.product(self.domain, repeat=2)):
            raise StructureError("equality table must be total over domain x domain")
        for d in self.domain:
            if not self.equality[(d, d)].designated:
                raise StructureError(f"equality must be t or b on the diagonal, got f for {d}")

    def _check_total(self, name: str, table: Dict[Tuple[str, ...], object]):
        arities = {len(key) for key in table}
        if len(arities) != 1:
            raise StructureError(f"table for '{name}' is empty or mixes arities")
        (arity,) = arities
        if set(table) != set(itertools.product(self.domain, repeat=arity)):
            raise StructureError(f"table for '{name}' is not total over the domain")

    def __hash__(self) -> int:
        return hash((self.domain, tuple(sorted(self.predicates)), tuple(sorted(self.functions))))

    def arity(self, symbol: str) -> int:
        table = self.functions.get(symbol) or self.predicates.get(symbol)
        if table is None:
            raise KeyError(symbol)
        return len(next(iter(table)))

    def cells(self) -> Iterator[TruthValue]:
        """Every truth-valued cell: predicate tables then the equality table."""
        for table in self.predicates.values():
            yield from table.values()
        yield from self.equality.values()


def identity_equality(domain: Tuple[str, ...]) -> Dict[Tuple[str, str], TruthValue]:
    return {
        (d, e): TruthValue.T if d == e else TruthValue.F for d, e in itertools.product(domain, repeat=2)
    }


# Verdicts of the bounded searches


@dataclass(frozen=True)
class CounterModel:
    """A structure and assignment witnessing failure; values holds the evaluated formulas."""

    structure: Structure
    assignment: Tuple[Tuple[str, str], ...]
    values: Tuple[TruthValue, ...] = ()

    @property
    def assignment_map(self) -> Assignment:
        return dict(self.assignment)


@dataclass(frozen=True)
class NoCounterModelUpTo:
    bound: int


@dataclass(frozen=True)
class Inconclusive:
    """The search budget ran out before domain size searched_up_to + 1 could be covered."""

    searched_up_to: int
    budget: int


Verdict = Union[CounterModel, NoCounterModelUpTo, Inconclusive]


# Proofs


@dataclass(frozen=True)
class Sequent:
    hypotheses: Tuple[Formula, ...]
    conclusion: Formula


@dataclass(frozen=True)
class RuleApplication:
    rule: str
    premises: Tuple[int, ...] = ()
    direction: Optional[str] = None  # "down" or "up" for two-way rules
    index: Optional[int] = None  # i of And-E-i / Or-I-i
    var: Optional[str] = None
    term: Optional[Term] = None
    template: Optional[Formula] = None


@dataclass(frozen=True)
class DerivationLine:
    number: int
    sequent: Sequent
    justification: Optional[RuleApplication] = None  # None marks a hypothesis line

    @property
    def is_hypothesis(self) -> bool:
        return self.justification is None


@dataclass(frozen=True)
class Derivation:
    lines: Tuple[DerivationLine, ...]


@dataclass(frozen=True)
class LineVerdict:
    number: int
    ok: bool
    reason: str = ""


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    line: Optional[int] = None
    reason: str = ""
    verdicts: Tuple[LineVerdict, ...] = ()


class Mode(Enum):
    LP = "LP"
    CLASSICAL = "Classical"

    @classmethod
    def from_text(cls, text: str) -> "Mode":
        for mode in cls:
            if mode.value.lower() == text.strip().lower():
                return mode
        raise ValueError(f"unknown mode '{text}' (expected LP or Classical)")


# Connective tables for the census

BinaryTable = Dict[Tuple[TruthValue, TruthValue], TruthValue]


@dataclass(frozen=True)
class ConnectiveTable:
    neg: Dict[TruthValue, TruthValue]
    conj: BinaryTable
    disj: BinaryTable
    impl: BinaryTable

    def key(self) -> Tuple[TruthValue, ...]:
        """Cells in canonical order; two tables are equal iff their keys are."""
        pairs = list(itertools.product(TRUTH_VALUES, repeat=2))
        return (
            tuple(self.neg[v] for v in TRUTH_VALUES)
            + tuple(self.conj[p] for p in pairs)
            + tuple(self.disj[p] for p in pairs)
            + tuple(self.impl[p] for p in pairs)
        )

    def __hash__(self) -> int:
        return hash(self.key())
