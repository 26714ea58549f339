"""QSL expectations: exact values, syntax, connectives, recursive predicates and evaluation."""

from .values import ExtQ, ZERO, ONE, INF, ext_max, ext_min
from .ast import (
    Expectation, SLFormula,
    EConst, Iverson, Emp, PointsTo, ValidPointer, Contains, ContainsAny, Size,
    ListSegment, ListLength, Tree, Path,
    Add, Mul, Monus, Max, Min, BigSum, BigSep, Sup, Inf, OneMinus, Power,
    SepCon, SepImp, ErrSepCon, ErrSepImp,
    SLPure, SLEmp, SLPointsTo, SLAnd, SLNot, SLExists, SLStar, SLWand,
    BINARY_NODES, HEAP_ATOMS, const, ZERO_E, ONE_E, INF_E, EMP, SIZE,
)
from .parser import parse_expectation, parse_sl_formula
from .printer import render_expectation, render_sl_formula
from .connectives import broken_sepcon, sepcon_hook_active
from .predicates import eval_fixpoint_predicate, clear_predicate_cache, PREDICATE_NAMES
from .evaluator import (
    compile_expectation,
    eval_expectation,
    free_vars_expectation,
    is_predicate,
    substitute,
    EntailmentResult,
    entails,
    equivalent,
)
from .embedding import embed_sl, sl_satisfies
from .analysis import ExpectationClass, classify_expectation

__all__ = [
    # Values
    "ExtQ", "ZERO", "ONE", "INF", "ext_max", "ext_min",
    # AST
    "Expectation", "SLFormula",
    "EConst", "Iverson", "Emp", "PointsTo", "ValidPointer", "Contains", "ContainsAny", "Size",
    "ListSegment", "ListLength", "Tree", "Path",
    "Add", "Mul", "Monus", "Max", "Min", "BigSum", "BigSep", "Sup", "Inf", "OneMinus", "Power",
    "SepCon", "SepImp", "ErrSepCon", "ErrSepImp",
    "SLPure", "SLEmp", "SLPointsTo", "SLAnd", "SLNot", "SLExists", "SLStar", "SLWand",
    "BINARY_NODES", "HEAP_ATOMS", "const", "ZERO_E", "ONE_E", "INF_E", "EMP", "SIZE",
    # Concrete syntax
    "parse_expectation", "parse_sl_formula", "render_expectation", "render_sl_formula",
    # Evaluation
    "broken_sepcon", "sepcon_hook_active",
    "eval_fixpoint_predicate", "clear_predicate_cache", "PREDICATE_NAMES",
    "compile_expectation", "eval_expectation", "free_vars_expectation", "is_predicate", "substitute",
    "EntailmentResult", "entails", "equivalent",
    "embed_sl", "sl_satisfies",
    "ExpectationClass", "classify_expectation",
]
