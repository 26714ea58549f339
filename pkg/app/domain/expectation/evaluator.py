"""Exact evaluation of expectations over the bounded model.

Expectations are compiled once per (expectation, domain) into closures
``fn(env, heap) -> ExtQ``; every public entry point goes through
compile_expectation.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Optional

from app.domain.state import EMPTY_HEAP, Heap, ProgState, block_heap, enumerate_states, heap_extensions
from app.domain.syntax import (
    ArithExpr, Var, arith_vars, compile_arith, compile_guard, guard_vars, subst_arith, subst_guard,
)
from app.models.enums import Verdict
from app.models.errors import InputError, OperandRangeError
from app.models.schemas import DomainConfig

from .ast import (
    Expectation,
    EConst, Iverson, Emp, PointsTo, ValidPointer, Contains, ContainsAny, Size,
    ListSegment, ListLength, Tree, Path,
    Add, Mul, Monus, Max, Min, BigSum, BigSep, Sup, Inf, OneMinus, Power,
    SepCon, SepImp, ErrSepCon, ErrSepImp, HEAP_ATOMS, EMP,
)
from .connectives import (
    StateFn, err_sep_con, err_sep_imp, sep_con, sep_con_footprint, sep_imp, sepcon_hook_active,
)
from .predicates import solve
from .values import ExtQ, ONE, ZERO, ext_max, ext_min

logger = logging.getLogger(__name__)

Env = Mapping[str, int]
_FOOTPRINT_ATOMS = (Emp, PointsTo, ValidPointer)


def compile_expectation(e: Expectation, cfg: DomainConfig) -> StateFn:
    """Compile ``e`` into a function of (stack, heap) under ``cfg``."""
    return _compile(e, cfg, sepcon_hook_active())


def eval_expectation(e: Expectation, state: ProgState, cfg: DomainConfig) -> ExtQ:
    return compile_expectation(e, cfg)(state.stack, state.heap)


@lru_cache(maxsize=20_000)
def _compile(e: Expectation, cfg: DomainConfig, broken: bool) -> StateFn:
    def sub(x: Expectation) -> StateFn:
        return _compile(x, cfg, broken)

    if isinstance(e, EConst):
        value = e.value
        return lambda env, h: value

    if isinstance(e, Iverson):
        guard = compile_guard(e.guard)
        return lambda env, h: ONE if guard(env) else ZERO

    if isinstance(e, Emp):
        return lambda env, h: ZERO if h else ONE

    if isinstance(e, PointsTo):
        footprint = _points_to_footprint(e)

        def points_to(env: Env, h: Heap) -> ExtQ:
            block = footprint(env, h)
            return ONE if block is not None and len(block) == len(h) else ZERO
        return points_to

    if isinstance(e, ValidPointer):
        addr = compile_arith(e.addr)
        return lambda env, h: ONE if len(h) == 1 and addr(env) in h else ZERO

    if isinstance(e, Contains):
        addr, value = compile_arith(e.addr), compile_arith(e.value)

        def contains(env: Env, h: Heap) -> ExtQ:
            a = addr(env)
            return ONE if a in h and h[a] == value(env) else ZERO
        return contains

    if isinstance(e, ContainsAny):
        addr = compile_arith(e.addr)
        return lambda env, h: ONE if addr(env) in h else ZERO

    if isinstance(e, Size):
        return lambda env, h: ExtQ(len(h))

    if isinstance(e, (ListSegment, ListLength)):
        name = "ls" if isinstance(e, ListSegment) else "len"
        head, tail = compile_arith(e.head), compile_arith(e.tail)
        return lambda env, h: solve((name, (head(env), tail(env)), h))

    if isinstance(e, Tree):
        root = compile_arith(e.root)
        return lambda env, h: solve(("tree", (root(env),), h))

    if isinstance(e, Path):
        name = f"path{e.record_size}"
        root = compile_arith(e.root)
        return lambda env, h: solve((name, (root(env),), h))

    if isinstance(e, Add):
        left, right = sub(e.left), sub(e.right)
        return lambda env, h: left(env, h) + right(env, h)

    if isinstance(e, Mul):
        left, right = sub(e.left), sub(e.right)

        def mul(env: Env, h: Heap) -> ExtQ:
            x = left(env, h)
            return ZERO if x.is_zero() else x * right(env, h)
        return mul

    if isinstance(e, Monus):
        left, right = sub(e.left), sub(e.right)
        return lambda env, h: left(env, h).monus(right(env, h))

    if isinstance(e, Max):
        left, right = sub(e.left), sub(e.right)
        return lambda env, h: max(left(env, h), right(env, h))

    if isinstance(e, Min):
        left, right = sub(e.left), sub(e.right)
        return lambda env, h: min(left(env, h), right(env, h))

    if isinstance(e, BigSum):
        terms = [sub(t) for t in e.terms]
        return lambda env, h: sum((t(env, h) for t in terms), ZERO)

    if isinstance(e, BigSep):
        if not e.terms:
            return sub(EMP)
        folded = e.terms[-1]
        for t in reversed(e.terms[:-1]):
            folded = SepCon(t, folded)
        return sub(folded)

    if isinstance(e, (Sup, Inf)):
        body = sub(e.body)
        var = e.var
        values = cfg.values
        combine = ext_max if isinstance(e, Sup) else ext_min

        def quantified(env: Env, h: Heap) -> ExtQ:
            local = dict(env)

            def at(v: int) -> ExtQ:
                local[var] = v
                return body(local, h)
            return combine(at(v) for v in values)
        return quantified

    if isinstance(e, OneMinus):
        operand = sub(e.operand)

        def one_minus(env: Env, h: Heap) -> ExtQ:
            x = operand(env, h)
            if ONE < x:
                raise OperandRangeError(f"1 - E applied to {x}, which exceeds 1", value=str(x))
            return x.one_minus()
        return one_minus

    if isinstance(e, Power):
        base = ExtQ(e.base)
        exponent = sub(e.exponent)

        def power(env: Env, h: Heap) -> ExtQ:
            n = exponent(env, h)
            if n.is_infinite or n.fraction.denominator != 1:
                raise OperandRangeError(f"pow exponent {n} is not a natural number", value=str(n))
            return base ** n.fraction.numerator
        return power

    if isinstance(e, SepCon):
        left, right = e.left, e.right
        if not broken and isinstance(right, _FOOTPRINT_ATOMS) and not isinstance(left, _FOOTPRINT_ATOMS):
            left, right = right, left
        if not broken and isinstance(left, _FOOTPRINT_ATOMS):
            footprint, rest = _footprint(left), sub(right)
            return lambda env, h: sep_con_footprint(footprint, rest, env, h)
        lfn, rfn = sub(left), sub(right)
        return lambda env, h: sep_con(lfn, rfn, env, h, broken)

    if isinstance(e, ErrSepCon):
        lfn, rfn = sub(e.left), sub(e.right)
        return lambda env, h: err_sep_con(lfn, rfn, env, h)

    if isinstance(e, (SepImp, ErrSepImp)):
        if not is_predicate(e.left):
            raise InputError(
                "the left operand of a separating implication must be a predicate",
                operand=type(e.left).__name__,
            )
        candidates = _candidates(e.left, cfg, broken)
        lfn, rfn = sub(e.left), sub(e.right)
        if isinstance(e, SepImp):
            return lambda env, h: sep_imp(lfn, rfn, candidates, env, h)
        return lambda env, h: err_sep_imp(lfn, rfn, candidates, env, h)

    raise TypeError(f"not an expectation: {e!r}")


# ═══════════════════════════════════════════════════════════════════════════════
# Footprints and extension candidates of heap atoms
# ═══════════════════════════════════════════════════════════════════════════════

def _points_to_footprint(e: PointsTo) -> Callable[[Env, Heap], Optional[Heap]]:
    addr = compile_arith(e.addr)
    values = [compile_arith(v) for v in e.values]

    def footprint(env: Env, h: Heap) -> Optional[Heap]:
        a = addr(env)
        cells = []
        for i, value in enumerate(values):
            v = value(env)
            if h.get(a + i) != v:
                return None
            cells.append((a + i, v))
        return Heap(cells)
    return footprint


def _footprint(e: Expectation) -> Callable[[Env, Heap], Optional[Heap]]:
    if isinstance(e, Emp):
        return lambda env, h: EMPTY_HEAP
    if isinstance(e, PointsTo):
        return _points_to_footprint(e)
    addr = compile_arith(e.addr)

    def valid(env: Env, h: Heap) -> Optional[Heap]:
        a = addr(env)
        return Heap({a: h[a]}) if a in h else None
    return valid


def _candidates(left: Expectation, cfg: DomainConfig, broken: bool) -> Callable[[Env, Heap], Iterable[Heap]]:
    """Disjoint extensions of h on which ``left`` may evaluate to 1."""
    if not broken and isinstance(left, PointsTo):
        addr = compile_arith(left.addr)
        values = [compile_arith(v) for v in left.values]

        def block(env: Env, h: Heap) -> tuple[Heap, ...]:
            a = addr(env)
            vs = [v(env) for v in values]
            if all(1 <= a + i <= cfg.addr_count and a + i not in h for i in range(len(vs))) \
                    and all(cfg.in_domain(v) for v in vs):
                return (block_heap(a, vs),)
            return ()
        return block
    if not broken and isinstance(left, ValidPointer):
        addr = compile_arith(left.addr)

        def cells(env: Env, h: Heap) -> tuple[Heap, ...]:
            a = addr(env)
            if 1 <= a <= cfg.addr_count and a not in h:
                return tuple(Heap({a: v}) for v in cfg.values)
            return ()
        return cells
    if not broken and isinstance(left, Emp):
        return lambda env, h: (EMPTY_HEAP,)
    return lambda env, h: heap_extensions(cfg, h)


# ═══════════════════════════════════════════════════════════════════════════════
# Syntactic queries
# ═══════════════════════════════════════════════════════════════════════════════

def free_vars_expectation(e: Expectation) -> frozenset[str]:
    """Variables occurring free in ``e``; quantifier binders are excluded."""
    if isinstance(e, (EConst, Emp, Size)):
        return frozenset()
    if isinstance(e, Iverson):
        return guard_vars(e.guard)
    if isinstance(e, PointsTo):
        return arith_vars(e.addr).union(*(arith_vars(v) for v in e.values))
    if isinstance(e, (ValidPointer, ContainsAny)):
        return arith_vars(e.addr)
    if isinstance(e, Contains):
        return arith_vars(e.addr) | arith_vars(e.value)
    if isinstance(e, (ListSegment, ListLength)):
        return arith_vars(e.head) | arith_vars(e.tail)
    if isinstance(e, (Tree, Path)):
        return arith_vars(e.root)
    if isinstance(e, (Sup, Inf)):
        return free_vars_expectation(e.body) - {e.var}
    if isinstance(e, OneMinus):
        return free_vars_expectation(e.operand)
    if isinstance(e, Power):
        return free_vars_expectation(e.exponent)
    if isinstance(e, (BigSum, BigSep)):
        return frozenset().union(*(free_vars_expectation(t) for t in e.terms))
    return free_vars_expectation(e.left) | free_vars_expectation(e.right)


def is_predicate(e: Expectation) -> bool:
    """Syntactic test for expectations that only take the values 0 and 1."""
    if isinstance(e, EConst):
        return e.value == 0 or e.value == 1
    if isinstance(e, (Iverson, ListSegment, Tree) + HEAP_ATOMS):
        return True
    if isinstance(e, (Mul, Max, Monus, SepCon, ErrSepCon, ErrSepImp)):
        return is_predicate(e.left) and is_predicate(e.right)
    if isinstance(e, Min):
        return (is_predicate(e.left) and _zero_one_inf(e.right)) or (is_predicate(e.right) and _zero_one_inf(e.left))
    if isinstance(e, BigSep):
        return all(is_predicate(t) for t in e.terms)
    if isinstance(e, (Sup, Inf)):
        return is_predicate(e.body)
    if isinstance(e, OneMinus):
        return is_predicate(e.operand)
    return False


def _zero_one_inf(e: Expectation) -> bool:
    if is_predicate(e):
        return True
    if isinstance(e, EConst):
        return e.value.is_infinite
    if isinstance(e, SepImp):
        return is_predicate(e.left) and _zero_one_inf(e.right)
    return False


# ═══════════════════════════════════════════════════════════════════════════════
# Substitution
# ═══════════════════════════════════════════════════════════════════════════════

def _fresh(base: str, avoid: frozenset[str]) -> str:
    n = 1
    while f"{base}_{n}" in avoid:
        n += 1
    return f"{base}_{n}"


def substitute(e: Expectation, x: str, replacement: ArithExpr) -> Expectation:
    """Capture-avoiding E[x/replacement]."""
    def arith(a: ArithExpr) -> ArithExpr:
        return subst_arith(a, x, replacement)

    if isinstance(e, (EConst, Emp, Size)):
        return e
    if isinstance(e, Iverson):
        return Iverson(subst_guard(e.guard, x, replacement))
    if isinstance(e, PointsTo):
        return PointsTo(arith(e.addr), tuple(arith(v) for v in e.values))
    if isinstance(e, (ValidPointer, ContainsAny)):
        return type(e)(arith(e.addr))
    if isinstance(e, Contains):
        return Contains(arith(e.addr), arith(e.value))
    if isinstance(e, (ListSegment, ListLength)):
        return type(e)(arith(e.head), arith(e.tail))
    if isinstance(e, Tree):
        return Tree(arith(e.root))
    if isinstance(e, Path):
        return Path(e.record_size, arith(e.root))
    if isinstance(e, (Sup, Inf)):
        if e.var == x or x not in free_vars_expectation(e.body):
            return e
        var, body = e.var, e.body
        if var in arith_vars(replacement):
            var = _fresh(var, arith_vars(replacement) | free_vars_expectation(body) | {x})
            body = substitute(body, e.var, Var(var))
        return type(e)(var, substitute(body, x, replacement))
    if isinstance(e, OneMinus):
        return OneMinus(substitute(e.operand, x, replacement))
    if isinstance(e, Power):
        return Power(e.base, substitute(e.exponent, x, replacement))
    if isinstance(e, (BigSum, BigSep)):
        return type(e)(tuple(substitute(t, x, replacement) for t in e.terms))
    return type(e)(substitute(e.left, x, replacement), substitute(e.right, x, replacement))


# ═══════════════════════════════════════════════════════════════════════════════
# Entailment
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class EntailmentResult:
    """Outcome of E1 ⪯ E2 over the enumerated states; the witness is the first violating state."""
    verdict: Verdict
    state: Optional[ProgState] = None
    lhs: Optional[ExtQ] = None
    rhs: Optional[ExtQ] = None

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS


def entails(e1: Expectation, e2: Expectation, cfg: DomainConfig, max_cells: int) -> EntailmentResult:
    f1, f2 = compile_expectation(e1, cfg), compile_expectation(e2, cfg)
    for state in enumerate_states(cfg, max_cells):
        lhs = f1(state.stack, state.heap)
        rhs = f2(state.stack, state.heap)
        if rhs < lhs:
            logger.debug("entailment fails at %s: %s > %s", state, lhs, rhs)
            return EntailmentResult(Verdict.COUNTEREXAMPLE, state, lhs, rhs)
    return EntailmentResult(Verdict.HOLDS)


def equivalent(e1: Expectation, e2: Expectation, cfg: DomainConfig, max_cells: int) -> EntailmentResult:
    """Pointwise equality; the witness is the first state where the two differ."""
    f1, f2 = compile_expectation(e1, cfg), compile_expectation(e2, cfg)
    for state in enumerate_states(cfg, max_cells):
        lhs = f1(state.stack, state.heap)
        rhs = f2(state.stack, state.heap)
        if lhs != rhs:
            return EntailmentResult(Verdict.COUNTEREXAMPLE, state, lhs, rhs)
    return EntailmentResult(Verdict.HOLDS)
