"""Canonical concrete syntax for hpGCL.

``parse_program(render_program(p)) == p`` for every AST: left-nested
sequences are wrapped in a block, everything else prints flat.
"""

from fractions import Fraction

from .ast import (
    ArithExpr, GuardExpr, Program,
    Const, Var, BinOp, BoolConst, Compare, And, Or, Not,
    Skip, Assign, Seq, Ite, While, PChoice, Alloc, Mutate, Lookup, Free, Uniform,
)

_ARITH_PREC = {"+": 1, "-": 1, "*": 2}


def render_arith(e: ArithExpr) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    prec = _ARITH_PREC[e.op]
    left = render_arith(e.left)
    right = render_arith(e.right)
    if isinstance(e.left, BinOp) and _ARITH_PREC[e.left.op] < prec:
        left = f"({left})"
    if isinstance(e.right, BinOp) and _ARITH_PREC[e.right.op] <= prec:
        right = f"({right})"
    return f"{left} {e.op} {right}"


def render_atom_arith(e: ArithExpr) -> str:
    """Render an expression as a factor: parenthesized unless it is a constant or variable."""
    text = render_arith(e)
    return text if isinstance(e, (Const, Var)) else f"({text})"


def render_guard(b: GuardExpr) -> str:
    return _guard(b, 0)


def _guard(b: GuardExpr, ctx: int) -> str:
    if isinstance(b, BoolConst):
        return "true" if b.value else "false"
    if isinstance(b, Compare):
        return f"{render_arith(b.left)} {b.op} {render_arith(b.right)}"
    if isinstance(b, Not):
        inner = _guard(b.operand, 3)
        if not isinstance(b.operand, (BoolConst, Not)):
            inner = f"({_guard(b.operand, 0)})"
        return f"!{inner}"
    if isinstance(b, Or):
        text = f"{_guard(b.left, 1)} || {_guard(b.right, 2)}"
        return f"({text})" if ctx > 1 else text
    if isinstance(b, And):
        text = f"{_guard(b.left, 2)} && {_guard(b.right, 3)}"
        return f"({text})" if ctx > 2 else text
    raise TypeError(f"not a guard: {b!r}")


def render_probability(p: Fraction) -> str:
    return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"


def render_program(p: Program) -> str:
    if isinstance(p, Skip):
        return "skip"
    if isinstance(p, Assign):
        return f"{p.var} := {render_arith(p.expr)}"
    if isinstance(p, Alloc):
        return f"{p.var} := new({', '.join(render_arith(e) for e in p.exprs)})"
    if isinstance(p, Lookup):
        return f"{p.var} := <{render_arith(p.addr)}>"
    if isinstance(p, Uniform):
        return f"{p.var} := uniform({render_arith(p.low)}, {render_arith(p.high)})"
    if isinstance(p, Mutate):
        return f"<{render_arith(p.addr)}> := {render_arith(p.value)}"
    if isinstance(p, Free):
        return f"free({render_arith(p.addr)})"
    if isinstance(p, Seq):
        first = render_program(p.first)
        if isinstance(p.first, Seq):
            first = f"{{ {first} }}"
        return f"{first}; {render_program(p.second)}"
    if isinstance(p, Ite):
        return f"if ({render_guard(p.guard)}) {{ {render_program(p.then)} }} else {{ {render_program(p.orelse)} }}"
    if isinstance(p, While):
        return f"while ({render_guard(p.guard)}) {{ {render_program(p.body)} }}"
    if isinstance(p, PChoice):
        return (
            f"{{ {render_program(p.left)} }} [{render_probability(p.prob)}] "
            f"{{ {render_program(p.right)} }}"
        )
    raise TypeError(f"not a program: {p!r}")
