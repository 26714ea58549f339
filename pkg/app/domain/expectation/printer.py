"""Concrete syntax for expectations and SL formulas.

Binary nodes nested inside binary nodes are always parenthesized, so the
output re-parses to the same tree regardless of operator precedence.
"""

from app.domain.syntax.printer import render_arith, render_atom_arith, render_guard, render_probability

from .ast import (
    Expectation, SLFormula,
    EConst, Iverson, Emp, PointsTo, ValidPointer, Contains, ContainsAny, Size,
    ListSegment, ListLength, Tree, Path,
    Add, Mul, Monus, Max, Min, BigSum, BigSep, Sup, Inf, OneMinus, Power,
    SepCon, SepImp, ErrSepCon, ErrSepImp, BINARY_NODES,
    SLPure, SLEmp, SLPointsTo, SLAnd, SLNot, SLExists, SLStar, SLWand,
)

_INFIX = {
    Add: "+", Mul: "*", Monus: ".-",
    SepCon: "**", SepImp: "-*", ErrSepCon: "@*", ErrSepImp: "-@",
}


def render_expectation(e: Expectation) -> str:
    if isinstance(e, EConst):
        return str(e.value)
    if isinstance(e, Iverson):
        return f"[{render_guard(e.guard)}]"
    if isinstance(e, Emp):
        return "[emp]"
    if isinstance(e, PointsTo):
        values = ", ".join(render_atom_arith(v) for v in e.values)
        return f"{render_atom_arith(e.addr)} |-> {values}"
    if isinstance(e, ValidPointer):
        return f"{render_atom_arith(e.addr)} |-> -"
    if isinstance(e, Contains):
        return f"{render_atom_arith(e.addr)} ~> {render_atom_arith(e.value)}"
    if isinstance(e, ContainsAny):
        return f"{render_atom_arith(e.addr)} ~> -"
    if isinstance(e, Size):
        return "size"
    if isinstance(e, ListSegment):
        return f"ls({render_arith(e.head)}, {render_arith(e.tail)})"
    if isinstance(e, ListLength):
        return f"len({render_arith(e.head)}, {render_arith(e.tail)})"
    if isinstance(e, Tree):
        return f"tree({render_arith(e.root)})"
    if isinstance(e, Path):
        return f"path({e.record_size}, {render_arith(e.root)})"
    if isinstance(e, Max):
        return f"max({render_expectation(e.left)}, {render_expectation(e.right)})"
    if isinstance(e, Min):
        return f"min({render_expectation(e.left)}, {render_expectation(e.right)})"
    if isinstance(e, BigSum):
        return "sum(" + "; ".join(render_expectation(t) for t in e.terms) + ")"
    if isinstance(e, BigSep):
        return "sep(" + "; ".join(render_expectation(t) for t in e.terms) + ")"
    if isinstance(e, Power):
        return f"pow({render_probability(e.base)}, {render_expectation(e.exponent)})"
    if isinstance(e, Sup):
        return f"sup {e.var}. {_operand(e.body)}"
    if isinstance(e, Inf):
        return f"inf {e.var}. {_operand(e.body)}"
    if isinstance(e, OneMinus):
        return f"1 - {_operand(e.operand)}"
    op = _INFIX.get(type(e))
    if op is None:
        raise TypeError(f"not an expectation: {e!r}")
    return f"{_operand(e.left)} {op} {_operand(e.right)}"


def _operand(e: Expectation) -> str:
    text = render_expectation(e)
    if isinstance(e, BINARY_NODES + (Sup, Inf, OneMinus, PointsTo, ValidPointer, Contains, ContainsAny)):
        if not isinstance(e, (Max, Min)):
            return f"({text})"
    if isinstance(e, EConst) and "/" in text:
        return f"({text})"
    return text


def render_sl_formula(phi: SLFormula) -> str:
    if isinstance(phi, SLPure):
        return f"[{render_guard(phi.guard)}]"
    if isinstance(phi, SLEmp):
        return "emp"
    if isinstance(phi, SLPointsTo):
        values = ", ".join(render_atom_arith(v) for v in phi.values)
        return f"{render_atom_arith(phi.addr)} |-> {values}"
    if isinstance(phi, SLNot):
        return f"~{_sl_operand(phi.operand)}"
    if isinstance(phi, SLExists):
        return f"exists {phi.var}. {_sl_operand(phi.body)}"
    if isinstance(phi, SLAnd):
        return f"{_sl_operand(phi.left)} & {_sl_operand(phi.right)}"
    if isinstance(phi, SLStar):
        return f"{_sl_operand(phi.left)} ** {_sl_operand(phi.right)}"
    if isinstance(phi, SLWand):
        return f"{_sl_operand(phi.left)} -* {_sl_operand(phi.right)}"
    raise TypeError(f"not an SL formula: {phi!r}")


def _sl_operand(phi: SLFormula) -> str:
    text = render_sl_formula(phi)
    if isinstance(phi, (SLAnd, SLStar, SLWand, SLExists, SLNot, SLPointsTo)):
        return f"({text})"
    return text
