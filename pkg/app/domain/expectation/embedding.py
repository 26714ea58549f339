"""Embedding of separation-logic formulas into one-bounded expectations.

sl_satisfies is a direct satisfaction checker for SL formulas. It shares
nothing with the expectation evaluator, so the two can be compared against
each other.
"""

from app.domain.state import ProgState, disjoint_union, heap_extensions, heap_partitions
from app.domain.syntax import compile_arith, eval_guard
from app.models.schemas import DomainConfig

from .ast import (
    Expectation, SLFormula,
    Iverson, Emp, PointsTo, Mul, Min, Sup, OneMinus, SepCon, SepImp, ONE_E,
    SLPure, SLEmp, SLPointsTo, SLAnd, SLNot, SLExists, SLStar, SLWand,
)


def embed_sl(phi: SLFormula) -> Expectation:
    """Structural translation into the 0/1 fragment.

    The magic wand is capped at 1, which gives its empty infimum the value 1
    of the one-bounded lattice instead of ∞.
    """
    if isinstance(phi, SLPure):
        return Iverson(phi.guard)
    if isinstance(phi, SLEmp):
        return Emp()
    if isinstance(phi, SLPointsTo):
        return PointsTo(phi.addr, phi.values)
    if isinstance(phi, SLAnd):
        return Mul(embed_sl(phi.left), embed_sl(phi.right))
    if isinstance(phi, SLNot):
        return OneMinus(embed_sl(phi.operand))
    if isinstance(phi, SLExists):
        return Sup(phi.var, embed_sl(phi.body))
    if isinstance(phi, SLStar):
        return SepCon(embed_sl(phi.left), embed_sl(phi.right))
    if isinstance(phi, SLWand):
        return Min(ONE_E, SepImp(embed_sl(phi.left), embed_sl(phi.right)))
    raise TypeError(f"not an SL formula: {phi!r}")


def sl_satisfies(state: ProgState, phi: SLFormula, cfg: DomainConfig) -> bool:
    """(s, h) ⊨ φ in the bounded model (quantifiers over V, wand extensions over 1..A)."""
    s, h = state
    if isinstance(phi, SLPure):
        return eval_guard(phi.guard, s)
    if isinstance(phi, SLEmp):
        return not h
    if isinstance(phi, SLPointsTo):
        a = compile_arith(phi.addr)(s)
        values = [compile_arith(v)(s) for v in phi.values]
        return len(h) == len(values) and all(h.get(a + i) == v for i, v in enumerate(values))
    if isinstance(phi, SLAnd):
        return sl_satisfies(state, phi.left, cfg) and sl_satisfies(state, phi.right, cfg)
    if isinstance(phi, SLNot):
        return not sl_satisfies(state, phi.operand, cfg)
    if isinstance(phi, SLExists):
        return any(sl_satisfies(ProgState(s.assign(phi.var, v), h), phi.body, cfg) for v in cfg.values)
    if isinstance(phi, SLStar):
        return any(
            sl_satisfies(ProgState(s, h1), phi.left, cfg) and sl_satisfies(ProgState(s, h2), phi.right, cfg)
            for h1, h2 in heap_partitions(h)
        )
    if isinstance(phi, SLWand):
        return all(
            sl_satisfies(ProgState(s, disjoint_union(h, ext)), phi.right, cfg)
            for ext in heap_extensions(cfg, h)
            if sl_satisfies(ProgState(s, ext), phi.left, cfg)
        )
    raise TypeError(f"not an SL formula: {phi!r}")
