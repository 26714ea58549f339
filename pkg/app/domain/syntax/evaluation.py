"""Evaluation of pure expressions and structural queries on programs."""

import operator
from functools import lru_cache
from typing import Callable, Mapping

from app.models.errors import InputError

from .ast import (
    ArithExpr, GuardExpr, Program,
    Const, Var, BinOp,
    BoolConst, Compare, And, Or, Not,
    Skip, Assign, Seq, Ite, While, PChoice, Alloc, Mutate, Lookup, Free, Uniform,
)

Env = Mapping[str, int]
ArithFn = Callable[[Env], int]
GuardFn = Callable[[Env], bool]

_ARITH = {"+": operator.add, "-": operator.sub, "*": operator.mul}
_COMPARE = {"=": operator.eq, "!=": operator.ne, "<": operator.lt, "<=": operator.le}


# ═══════════════════════════════════════════════════════════════════════════════
# Expression evaluation
# ═══════════════════════════════════════════════════════════════════════════════

@lru_cache(maxsize=None)
def compile_arith(e: ArithExpr) -> ArithFn:
    """Compile an arithmetic expression into a function of the stack."""
    if isinstance(e, Const):
        value = e.value
        return lambda env: value
    if isinstance(e, Var):
        name = e.name

        def read(env: Env) -> int:
            try:
                return env[name]
            except KeyError:
                raise InputError(f"variable {name!r} is not valuated by the stack", variable=name) from None
        return read
    if isinstance(e, BinOp):
        fn = _ARITH[e.op]
        left, right = compile_arith(e.left), compile_arith(e.right)
        return lambda env: fn(left(env), right(env))
    raise TypeError(f"not an arithmetic expression: {e!r}")


@lru_cache(maxsize=None)
def compile_guard(b: GuardExpr) -> GuardFn:
    """Compile a guard into a function of the stack."""
    if isinstance(b, BoolConst):
        value = b.value
        return lambda env: value
    if isinstance(b, Compare):
        fn = _COMPARE[b.op]
        left, right = compile_arith(b.left), compile_arith(b.right)
        return lambda env: fn(left(env), right(env))
    if isinstance(b, And):
        left, right = compile_guard(b.left), compile_guard(b.right)
        return lambda env: left(env) and right(env)
    if isinstance(b, Or):
        left, right = compile_guard(b.left), compile_guard(b.right)
        return lambda env: left(env) or right(env)
    if isinstance(b, Not):
        inner = compile_guard(b.operand)
        return lambda env: not inner(env)
    raise TypeError(f"not a guard: {b!r}")


def eval_arith(e: ArithExpr, s: Env) -> int:
    """s(e): integer evaluation, unbounded intermediates, no heap access."""
    return compile_arith(e)(s)


def eval_guard(b: GuardExpr, s: Env) -> bool:
    return compile_guard(b)(s)


# ═══════════════════════════════════════════════════════════════════════════════
# Variables
# ═══════════════════════════════════════════════════════════════════════════════

def arith_vars(e: ArithExpr) -> frozenset[str]:
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Var):
        return frozenset({e.name})
    return arith_vars(e.left) | arith_vars(e.right)


def guard_vars(b: GuardExpr) -> frozenset[str]:
    if isinstance(b, BoolConst):
        return frozenset()
    if isinstance(b, Compare):
        return arith_vars(b.left) | arith_vars(b.right)
    if isinstance(b, Not):
        return guard_vars(b.operand)
    return guard_vars(b.left) | guard_vars(b.right)


def modified_vars(p: Program) -> frozenset[str]:
    """Mod(c): variables a program may update."""
    if isinstance(p, (Assign, Alloc, Lookup, Uniform)):
        return frozenset({p.var})
    if isinstance(p, (Skip, Free, Mutate)):
        return frozenset()
    if isinstance(p, Seq):
        return modified_vars(p.first) | modified_vars(p.second)
    if isinstance(p, Ite):
        return modified_vars(p.then) | modified_vars(p.orelse)
    if isinstance(p, PChoice):
        return modified_vars(p.left) | modified_vars(p.right)
    if isinstance(p, While):
        return modified_vars(p.body)
    raise TypeError(f"not a program: {p!r}")


def program_vars(p: Program) -> frozenset[str]:
    """Vars(c): every variable occurring in the program."""
    if isinstance(p, Skip):
        return frozenset()
    if isinstance(p, Assign):
        return frozenset({p.var}) | arith_vars(p.expr)
    if isinstance(p, Alloc):
        return frozenset({p.var}).union(*(arith_vars(e) for e in p.exprs))
    if isinstance(p, Lookup):
        return frozenset({p.var}) | arith_vars(p.addr)
    if isinstance(p, Uniform):
        return frozenset({p.var}) | arith_vars(p.low) | arith_vars(p.high)
    if isinstance(p, Mutate):
        return arith_vars(p.addr) | arith_vars(p.value)
    if isinstance(p, Free):
        return arith_vars(p.addr)
    if isinstance(p, Seq):
        return program_vars(p.first) | program_vars(p.second)
    if isinstance(p, Ite):
        return guard_vars(p.guard) | program_vars(p.then) | program_vars(p.orelse)
    if isinstance(p, PChoice):
        return program_vars(p.left) | program_vars(p.right)
    if isinstance(p, While):
        return guard_vars(p.guard) | program_vars(p.body)
    raise TypeError(f"not a program: {p!r}")


# ═══════════════════════════════════════════════════════════════════════════════
# Structural queries
# ═══════════════════════════════════════════════════════════════════════════════

def subprograms(p: Program):
    """Yield p and all its subprograms, parents before children."""
    yield p
    if isinstance(p, Seq):
        yield from subprograms(p.first)
        yield from subprograms(p.second)
    elif isinstance(p, Ite):
        yield from subprograms(p.then)
        yield from subprograms(p.orelse)
    elif isinstance(p, PChoice):
        yield from subprograms(p.left)
        yield from subprograms(p.right)
    elif isinstance(p, While):
        yield from subprograms(p.body)


def is_loop_free(p: Program) -> bool:
    return not any(isinstance(q, While) for q in subprograms(p))


def is_alloc_free(p: Program) -> bool:
    return not any(isinstance(q, Alloc) for q in subprograms(p))


def is_probabilistic(p: Program) -> bool:
    return any(isinstance(q, (PChoice, Uniform)) for q in subprograms(p))


def count_allocs(p: Program) -> int:
    return sum(1 for q in subprograms(p) if isinstance(q, Alloc))


# ═══════════════════════════════════════════════════════════════════════════════
# Substitution
# ═══════════════════════════════════════════════════════════════════════════════

def subst_arith(e: ArithExpr, name: str, replacement: ArithExpr) -> ArithExpr:
    """e[name/replacement]."""
    if isinstance(e, Const):
        return e
    if isinstance(e, Var):
        return replacement if e.name == name else e
    return BinOp(e.op, subst_arith(e.left, name, replacement), subst_arith(e.right, name, replacement))


def subst_guard(b: GuardExpr, name: str, replacement: ArithExpr) -> GuardExpr:
    if isinstance(b, BoolConst):
        return b
    if isinstance(b, Compare):
        return Compare(b.op, subst_arith(b.left, name, replacement), subst_arith(b.right, name, replacement))
    if isinstance(b, Not):
        return Not(subst_guard(b.operand, name, replacement))
    return type(b)(subst_guard(b.left, name, replacement), subst_guard(b.right, name, replacement))
