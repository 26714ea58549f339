"""Syntax of QSL expectations and of the separation-logic formulas embedded into them."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from app.domain.syntax.ast import ArithExpr, GuardExpr

from .values import ExtQ


# ═══════════════════════════════════════════════════════════════════════════════
# Atoms
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class EConst:
    value: ExtQ


@dataclass(frozen=True)
class Iverson:
    guard: GuardExpr


@dataclass(frozen=True)
class Emp:
    pass


@dataclass(frozen=True)
class PointsTo:
    """e ↦ e1, ..., en: the heap is exactly the block at s(e)."""
    addr: ArithExpr
    values: tuple[ArithExpr, ...]


@dataclass(frozen=True)
class ValidPointer:
    """e ↦ −: the heap is exactly one cell at s(e)."""
    addr: ArithExpr


@dataclass(frozen=True)
class Contains:
    """e ↪ e': (e ↦ e') ⋆ 1."""
    addr: ArithExpr
    value: ArithExpr


@dataclass(frozen=True)
class ContainsAny:
    """e ↪ −: s(e) is allocated."""
    addr: ArithExpr


@dataclass(frozen=True)
class Size:
    pass


# ═══════════════════════════════════════════════════════════════════════════════
# Recursive predicates
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class ListSegment:
    head: ArithExpr
    tail: ArithExpr


@dataclass(frozen=True)
class ListLength:
    head: ArithExpr
    tail: ArithExpr


@dataclass(frozen=True)
class Tree:
    root: ArithExpr


@dataclass(frozen=True)
class Path:
    """Longest pointer path through records of ``record_size`` cells."""
    record_size: int
    root: ArithExpr


# ═══════════════════════════════════════════════════════════════════════════════
# Arithmetic and quantifiers
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Add:
    left: "Expectation"
    right: "Expectation"


@dataclass(frozen=True)
class Mul:
    left: "Expectation"
    right: "Expectation"


@dataclass(frozen=True)
class Monus:
    left: "Expectation"
    right: "Expectation"


@dataclass(frozen=True)
class Max:
    left: "Expectation"
    right: "Expectation"


@dataclass(frozen=True)
class Min:
    left: "Expectation"
    right: "Expectation"


@dataclass(frozen=True)
class BigSum:
    terms: tuple["Expectation", ...]


@dataclass(frozen=True)
class BigSep:
    terms: tuple["Expectation", ...]


@dataclass(frozen=True)
class Sup:
    var: str
    body: "Expectation"


@dataclass(frozen=True)
class Inf:
    var: str
    body: "Expectation"


@dataclass(frozen=True)
class OneMinus:
    operand: "Expectation"


@dataclass(frozen=True)
class Power:
    """base^E for a constant base in [0, 1] and a natural-number valued exponent."""
    base: Fraction
    exponent: "Expectation"


# ═══════════════════════════════════════════════════════════════════════════════
# Connectives
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class SepCon:
    left: "Expectation"
    right: "Expectation"


@dataclass(frozen=True)
class SepImp:
    left: "Expectation"  # a predicate
    right: "Expectation"


@dataclass(frozen=True)
class ErrSepCon:
    left: "Expectation"
    right: "Expectation"


@dataclass(frozen=True)
class ErrSepImp:
    left: "Expectation"  # a predicate
    right: "Expectation"


Expectation = Union[
    EConst, Iverson, Emp, PointsTo, ValidPointer, Contains, ContainsAny, Size,
    ListSegment, ListLength, Tree, Path,
    Add, Mul, Monus, Max, Min, BigSum, BigSep, Sup, Inf, OneMinus, Power,
    SepCon, SepImp, ErrSepCon, ErrSepImp,
]

BINARY_NODES = (Add, Mul, Monus, Max, Min, SepCon, SepImp, ErrSepCon, ErrSepImp)
HEAP_ATOMS = (Emp, PointsTo, ValidPointer, Contains, ContainsAny)


def const(value) -> EConst:
    return EConst(ExtQ(value))


ZERO_E = const(0)
ONE_E = const(1)
INF_E = EConst(ExtQ.infinity())
EMP = Emp()
SIZE = Size()


# ═══════════════════════════════════════════════════════════════════════════════
# Separation logic formulas
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class SLPure:
    guard: GuardExpr


@dataclass(frozen=True)
class SLEmp:
    pass


@dataclass(frozen=True)
class SLPointsTo:
    addr: ArithExpr
    values: tuple[ArithExpr, ...]


@dataclass(frozen=True)
class SLAnd:
    left: "SLFormula"
    right: "SLFormula"


@dataclass(frozen=True)
class SLNot:
    operand: "SLFormula"


@dataclass(frozen=True)
class SLExists:
    var: str
    body: "SLFormula"


@dataclass(frozen=True)
class SLStar:
    left: "SLFormula"
    right: "SLFormula"


@dataclass(frozen=True)
class SLWand:
    left: "SLFormula"
    right: "SLFormula"


SLFormula = Union[SLPure, SLEmp, SLPointsTo, SLAnd, SLNot, SLExists, SLStar, SLWand]
