"""hpGCL: the heap-manipulating probabilistic guarded command language.

Abstract syntax, a lark-based parser, a canonical printer, and evaluation of
pure (heap-independent) expressions and guards.
"""

from .ast import (
    ArithExpr, GuardExpr, Program,
    Const, Var, BinOp,
    BoolConst, Compare, And, Or, Not, TRUE, FALSE,
    Skip, SKIP, Assign, Seq, Ite, While, PChoice, Alloc, Mutate, Lookup, Free, Uniform,
    seq,
)
from .evaluation import (
    compile_arith,
    compile_guard,
    eval_arith,
    eval_guard,
    arith_vars,
    guard_vars,
    modified_vars,
    program_vars,
    subprograms,
    is_loop_free,
    is_alloc_free,
    is_probabilistic,
    count_allocs,
    subst_arith,
    subst_guard,
)
from .parser import parse_program, parse_guard, parse_arith
from .printer import render_program, render_guard, render_arith, render_atom_arith, render_probability

__all__ = [
    # AST
    "ArithExpr", "GuardExpr", "Program",
    "Const", "Var", "BinOp",
    "BoolConst", "Compare", "And", "Or", "Not", "TRUE", "FALSE",
    "Skip", "SKIP", "Assign", "Seq", "Ite", "While", "PChoice", "Alloc", "Mutate", "Lookup", "Free", "Uniform",
    "seq",
    # Evaluation
    "compile_arith", "compile_guard", "eval_arith", "eval_guard",
    "arith_vars", "guard_vars", "modified_vars", "program_vars", "subprograms",
    "is_loop_free", "is_alloc_free", "is_probabilistic", "count_allocs",
    "subst_arith", "subst_guard",
    # Concrete syntax
    "parse_program", "parse_guard", "parse_arith",
    "render_program", "render_guard", "render_arith", "render_atom_arith", "render_probability",
]
