"""Abstract syntax of hpGCL: arithmetic expressions, guards and programs.

All nodes are frozen dataclasses so that programs can be hashed, used as
dictionary keys (MDP configurations carry their remaining program) and
compared structurally.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


# ═══════════════════════════════════════════════════════════════════════════════
# Arithmetic expressions
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # "+", "-", "*"
    left: "ArithExpr"
    right: "ArithExpr"


ArithExpr = Union[Const, Var, BinOp]

ARITH_OPS = ("+", "-", "*")


# ═══════════════════════════════════════════════════════════════════════════════
# Guards
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Compare:
    op: str  # "=", "!=", "<", "<="
    left: ArithExpr
    right: ArithExpr


@dataclass(frozen=True)
class And:
    left: "GuardExpr"
    right: "GuardExpr"


@dataclass(frozen=True)
class Or:
    left: "GuardExpr"
    right: "GuardExpr"


@dataclass(frozen=True)
class Not:
    operand: "GuardExpr"


GuardExpr = Union[BoolConst, Compare, And, Or, Not]

COMPARE_OPS = ("=", "!=", "<", "<=")
TRUE = BoolConst(True)
FALSE = BoolConst(False)


# ═══════════════════════════════════════════════════════════════════════════════
# Programs
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Assign:
    var: str
    expr: ArithExpr


@dataclass(frozen=True)
class Seq:
    first: "Program"
    second: "Program"


@dataclass(frozen=True)
class Ite:
    guard: GuardExpr
    then: "Program"
    orelse: "Program"


@dataclass(frozen=True)
class While:
    guard: GuardExpr
    body: "Program"


@dataclass(frozen=True)
class PChoice:
    left: "Program"
    prob: Fraction  # probability of the left branch
    right: "Program"


@dataclass(frozen=True)
class Alloc:
    """x := new(e1, ..., en): a block of n consecutive fresh cells."""
    var: str
    exprs: tuple[ArithExpr, ...]


@dataclass(frozen=True)
class Mutate:
    """<e> := e'"""
    addr: ArithExpr
    value: ArithExpr


@dataclass(frozen=True)
class Lookup:
    """x := <e>"""
    var: str
    addr: ArithExpr


@dataclass(frozen=True)
class Free:
    addr: ArithExpr


@dataclass(frozen=True)
class Uniform:
    """x := uniform(e, e'): every integer of [s(e), s(e')] with equal probability."""
    var: str
    low: ArithExpr
    high: ArithExpr


Program = Union[Skip, Assign, Seq, Ite, While, PChoice, Alloc, Mutate, Lookup, Free, Uniform]

SKIP = Skip()


def seq(*programs: Program) -> Program:
    """Right-nested sequential composition; ``seq()`` is skip."""
    if not programs:
        return SKIP
    result = programs[-1]
    for p in reversed(programs[:-1]):
        result = Seq(p, result)
    return result
