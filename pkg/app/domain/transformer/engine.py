"""The mode-parameterized weakest-preexpectation engine.

Transformers are computed semantically: T⟦c⟧ maps a state function (the
postexpectation) to a memoized state function (the preexpectation), so the
result is defined on every state of the bounded model, including the larger
heaps that allocation produces. SemExpectation tabulates the result over
the enumerated states.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Union

from app.domain.expectation import (
    Expectation, ExtQ, ONE, ZERO, compile_expectation, free_vars_expectation, ext_max, ext_min,
)
from app.domain.expectation.connectives import err_sep_con, err_sep_imp, sep_con, sep_imp
from app.domain.state import (
    Heap, ProgState, Stack, block_heap, check_value, disjoint_union, enumerate_states, free_blocks,
    heap_extensions, store_var,
)
from app.domain.state.literals import render_heap, render_state
from app.domain.syntax import (
    Program, Skip, Assign, Seq, Ite, While, PChoice, Alloc, Mutate, Lookup, Free, Uniform,
    compile_arith, compile_guard, program_vars, render_guard,
)
from app.models.enums import ExhaustionPolicy, FixpointStatus
from app.models.errors import AddressSpaceExhausted, InputError, OperandRangeError, UniformRangeError
from app.models.schemas import DomainConfig

from .fixpoint import Approximation, LoopSolver, StateFun
from .modes import TransformerMode, WP

logger = logging.getLogger(__name__)

Post = Union[Expectation, StateFun]


def _memoized(fn: StateFun) -> StateFun:
    cache: dict[ProgState, ExtQ] = {}

    def lookup(state: ProgState) -> ExtQ:
        v = cache.get(state)
        if v is None:
            v = cache[state] = fn(state)
        return v
    return lookup


def post_function(post: Post, cfg: DomainConfig) -> StateFun:
    """A state function for a syntactic or already semantic postexpectation."""
    if callable(post):
        return post
    fn = compile_expectation(post, cfg)
    return lambda state: fn(state.stack, state.heap)


def needs_one_bounded(mode: TransformerMode) -> bool:
    """Liberal modes start their gfp at 1 and extrinsic modes evaluate ● and −●; both live in E≤1."""
    return mode.liberal or mode.extrinsic


def one_bounded_post(mode: TransformerMode, f: StateFun) -> StateFun:
    """``f`` with every evaluation checked against 1; values above raise OperandRangeError."""
    def bounded(state: ProgState) -> ExtQ:
        v = f(state)
        if ONE < v:
            raise OperandRangeError(
                f"{mode} is defined on postexpectations bounded by 1, got {v} at {render_state(state)}",
                mode=str(mode), value=str(v), state=render_state(state),
            )
        return v
    return bounded


class Transformer:
    """One transformer calculus bound to a domain and its evaluation options.

    Attributes:
        approximations: loop fixpoints that stopped on tolerance
        sink_hits: allocations that found no free block under the sink policy
    """

    def __init__(
        self,
        mode: TransformerMode,
        cfg: DomainConfig,
        *,
        literal_heap_rules: bool = False,
        exhaustion: ExhaustionPolicy = ExhaustionPolicy.ERROR,
    ):
        self.mode = mode
        self.cfg = cfg
        self.literal_heap_rules = literal_heap_rules
        self.exhaustion = exhaustion
        self.approximations: list[Approximation] = []
        self.sink_hits = 0
        self._fault = ONE if mode.extrinsic else ZERO

    def apply(self, c: Program, post: Post) -> StateFun:
        f = post_function(post, self.cfg)
        if needs_one_bounded(self.mode):
            f = one_bounded_post(self.mode, f)
        return self.transform(c, f)

    def transform(self, c: Program, f: StateFun) -> StateFun:
        return _memoized(self._build(c, f))

    # ── program constructs ────────────────────────────────────────────────────

    def _build(self, c: Program, f: StateFun) -> StateFun:
        cfg = self.cfg
        if isinstance(c, Skip):
            return f

        if isinstance(c, Assign):
            expr = compile_arith(c.expr)
            return lambda state: f(store_var(cfg, state, c.var, expr(state.stack)))

        if isinstance(c, Seq):
            return self.transform(c.first, self.transform(c.second, f))

        if isinstance(c, Ite):
            guard = compile_guard(c.guard)
            then, orelse = self.transform(c.then, f), self.transform(c.orelse, f)
            return lambda state: then(state) if guard(state.stack) else orelse(state)

        if isinstance(c, PChoice):
            p, q = ExtQ(c.prob), ExtQ(1 - c.prob)
            left, right = self.transform(c.left, f), self.transform(c.right, f)
            return lambda state: p * left(state) + q * right(state)

        if isinstance(c, Uniform):
            return self._uniform(c, f)

        if isinstance(c, While):
            guard = compile_guard(c.guard)
            solver = LoopSolver(
                lambda state: guard(state.stack),
                lambda y: self.transform(c.body, y),
                f,
                cfg,
                greatest=self.mode.liberal,
                label=f"while ({render_guard(c.guard)})",
                on_approximate=self.approximations.append,
            )
            return solver.value

        if isinstance(c, Alloc):
            return self._alloc(c, f)
        if self.literal_heap_rules:
            if isinstance(c, Free):
                return self._free_literal(c, f)
            if isinstance(c, Mutate):
                return self._mutate_literal(c, f)
            if isinstance(c, Lookup):
                return self._lookup_literal(c, f)
        if isinstance(c, Free):
            return self._free(c, f)
        if isinstance(c, Mutate):
            return self._mutate(c, f)
        if isinstance(c, Lookup):
            return self._lookup(c, f)
        raise TypeError(f"not a program: {c!r}")

    def _uniform(self, c: Uniform, f: StateFun) -> StateFun:
        low, high = compile_arith(c.low), compile_arith(c.high)
        cfg = self.cfg

        def uniform(state: ProgState) -> ExtQ:
            a, b = low(state.stack), high(state.stack)
            if a > b:
                raise UniformRangeError(a, b)
            weight = ExtQ(Fraction(1, b - a + 1))
            return sum((weight * f(store_var(cfg, state, c.var, v)) for v in range(a, b + 1)), ZERO)
        return uniform

    # ── heap statements, fast forms ───────────────────────────────────────────

    def _free(self, c: Free, f: StateFun) -> StateFun:
        addr = compile_arith(c.addr)

        def free(state: ProgState) -> ExtQ:
            a = addr(state.stack)
            if a not in state.heap:
                return self._fault
            return f(state.with_heap(state.heap.without(a)))
        return free

    def _mutate(self, c: Mutate, f: StateFun) -> StateFun:
        addr, value = compile_arith(c.addr), compile_arith(c.value)
        cfg = self.cfg

        def mutate(state: ProgState) -> ExtQ:
            a = addr(state.stack)
            if a not in state.heap:
                return self._fault
            v = check_value(cfg, f"<{a}>", value(state.stack))
            return f(state.with_heap(state.heap.updated(a, v)))
        return mutate

    def _lookup(self, c: Lookup, f: StateFun) -> StateFun:
        addr = compile_arith(c.addr)
        cfg = self.cfg

        def lookup(state: ProgState) -> ExtQ:
            a = addr(state.stack)
            if a not in state.heap:
                return self._fault
            return f(store_var(cfg, state, c.var, state.heap[a]))
        return lookup

    def _alloc(self, c: Alloc, f: StateFun) -> StateFun:
        exprs = [compile_arith(e) for e in c.exprs]
        cfg = self.cfg
        combine = ext_max if self.mode.angelic else ext_min
        literal = self.literal_heap_rules and not self.mode.angelic

        def alloc(state: ProgState) -> ExtQ:
            s, h = state
            values = [check_value(cfg, "new", e(s)) for e in exprs]
            bases = free_blocks(cfg, h, len(values))
            if not bases:
                return self._exhausted(len(values), h)
            if literal:
                return self._alloc_literal(c.var, values, f, state)
            return combine(
                f(ProgState(store_var(cfg, state, c.var, u).stack, disjoint_union(h, block_heap(u, values))))
                for u in bases
            )
        return alloc

    def _exhausted(self, length: int, h: Heap) -> ExtQ:
        if self.exhaustion is ExhaustionPolicy.SINK:
            self.sink_hits += 1
            return ZERO
        raise AddressSpaceExhausted(length, self.cfg.addr_count, render_heap(h))

    # ── heap statements through the separating connectives ────────────────────

    def _as_state_fn(self, f: StateFun) -> Callable[[Stack, Heap], ExtQ]:
        return lambda env, h: f(ProgState(env, h))

    def _free_literal(self, c: Free, f: StateFun) -> StateFun:
        # (e ↦ −) ⋆ X, or (e ↦ −) ● X
        addr = compile_arith(c.addr)
        g = self._as_state_fn(f)
        con = err_sep_con if self.mode.extrinsic else sep_con

        def free(state: ProgState) -> ExtQ:
            a = addr(state.stack)
            return con(_valid_pointer(a), g, state.stack, state.heap)
        return free

    def _mutate_literal(self, c: Mutate, f: StateFun) -> StateFun:
        # (e ↦ −) ⋆ ((e ↦ e') −⋆ X), or with ● and −●
        addr, value = compile_arith(c.addr), compile_arith(c.value)
        g = self._as_state_fn(f)
        cfg = self.cfg
        con, imp = (err_sep_con, err_sep_imp) if self.mode.extrinsic else (sep_con, sep_imp)

        def mutate(state: ProgState) -> ExtQ:
            a, v = addr(state.stack), value(state.stack)
            if a in state.heap:
                check_value(cfg, f"<{a}>", v)
            cell = _single_cell(a, v)

            def wand(env: Stack, h1: Heap) -> ExtQ:
                return imp(cell, g, lambda e, h: heap_extensions(cfg, h), env, h1)
            return con(_valid_pointer(a), wand, state.stack, state.heap)
        return mutate

    def _lookup_literal(self, c: Lookup, f: StateFun) -> StateFun:
        # sup_v (e ↦ v) ⋆ ((e ↦ v) −⋆ X[x/v]); extrinsic: inf_v with ● and −●
        addr = compile_arith(c.addr)
        cfg = self.cfg
        con, imp = (err_sep_con, err_sep_imp) if self.mode.extrinsic else (sep_con, sep_imp)
        combine = ext_min if self.mode.extrinsic else ext_max

        def lookup(state: ProgState) -> ExtQ:
            a = addr(state.stack)

            def at(v: int) -> ExtQ:
                cell = _single_cell(a, v)
                g = self._as_state_fn(lambda st: f(store_var(cfg, st, c.var, v)))

                def wand(env: Stack, h1: Heap) -> ExtQ:
                    return imp(cell, g, lambda e, h: heap_extensions(cfg, h), env, h1)
                return con(cell, wand, state.stack, state.heap)
            return combine(at(v) for v in cfg.values)
        return lookup

    def _alloc_literal(self, var: str, values: list[int], f: StateFun, state: ProgState) -> ExtQ:
        # inf_v (v ↦ e1, ..., en) −⋆ X[x/v]
        cfg = self.cfg

        def at(v: int) -> ExtQ:
            block = block_heap(v, values)
            g = self._as_state_fn(lambda st: f(store_var(cfg, st, var, v)))
            return sep_imp(
                lambda env, h: ONE if h == block else ZERO,
                g,
                lambda env, h: heap_extensions(cfg, h),
                state.stack,
                state.heap,
            )
        return ext_min(at(v) for v in cfg.values)


def _valid_pointer(a: int) -> Callable[[Stack, Heap], ExtQ]:
    return lambda env, h: ONE if len(h) == 1 and a in h else ZERO


def _single_cell(a: int, v: int) -> Callable[[Stack, Heap], ExtQ]:
    return lambda env, h: ONE if len(h) == 1 and h.get(a) == v else ZERO


# ═══════════════════════════════════════════════════════════════════════════════
# Tabulated results
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass
class SemExpectation:
    """A transformer result tabulated over enumerated states.

    ``approximations`` lists loop fixpoints that stopped on tolerance; for
    those the table is below the least (or above the greatest) fixed point
    by at most the recorded residual per loop. ``lower_bound`` is set when
    exhausted allocations contributed 0 under the sink policy.
    """
    table: dict[ProgState, ExtQ]
    cfg: DomainConfig
    mode: TransformerMode = WP
    approximations: list[Approximation] = field(default_factory=list)
    lower_bound: bool = False
    function: Optional[StateFun] = None

    def __getitem__(self, state: ProgState) -> ExtQ:
        v = self.table.get(state)
        if v is None:
            if self.function is None:
                raise KeyError(state)
            v = self.table[state] = self.function(state)
        return v

    def __len__(self) -> int:
        return len(self.table)

    def items(self):
        return self.table.items()

    @property
    def status(self) -> FixpointStatus:
        return FixpointStatus.APPROXIMATE if self.approximations else FixpointStatus.EXACT

    @property
    def residual(self) -> ExtQ:
        return ext_max((a.residual for a in self.approximations), empty=ZERO)

    @property
    def direction(self) -> Optional[str]:
        return self.approximations[0].direction if self.approximations else None


def check_vars(c: Program, post: Post, cfg: DomainConfig) -> None:
    """Vars(c) ∪ Vars(post) must be valuated by the domain."""
    used = set(program_vars(c))
    if not callable(post):
        used |= free_vars_expectation(post)
    missing = sorted(used - set(cfg.vars))
    if missing:
        raise InputError(f"variables {missing} are not in the domain ({', '.join(cfg.vars)})", missing=missing)


def wp_function(
    mode: TransformerMode,
    c: Program,
    post: Post,
    cfg: DomainConfig,
    *,
    literal_heap_rules: bool = False,
    exhaustion: ExhaustionPolicy = ExhaustionPolicy.ERROR,
) -> tuple[StateFun, Transformer]:
    """T⟦c⟧(post) as a state function on arbitrary states, with its transformer for diagnostics."""
    check_vars(c, post, cfg)
    engine = Transformer(mode, cfg, literal_heap_rules=literal_heap_rules, exhaustion=exhaustion)
    return engine.apply(c, post), engine


def transform(
    mode: TransformerMode,
    c: Program,
    post: Post,
    cfg: DomainConfig,
    max_cells: int,
    *,
    literal_heap_rules: bool = False,
    exhaustion: ExhaustionPolicy = ExhaustionPolicy.ERROR,
    states: Optional[Iterable[ProgState]] = None,
) -> SemExpectation:
    """Tabulate T⟦c⟧(post) for transformer ``mode``.

    Args:
        mode: one of the eight calculi
        c: the program
        post: syntactic postexpectation or a state function
        cfg: the bounded model
        max_cells: heap size bound of the enumerated states
        literal_heap_rules: evaluate heap statements through ⋆/−⋆ (or ●/−●)
        exhaustion: what an allocation without a free block does
        states: tabulate over these states instead of the enumerated ones

    Returns:
        SemExpectation over the requested states
    """
    fn, engine = wp_function(mode, c, post, cfg, literal_heap_rules=literal_heap_rules, exhaustion=exhaustion)
    domain = enumerate_states(cfg, max_cells) if states is None else list(states)
    if needs_one_bounded(mode):
        # posts a loop never reaches are still outside the mode's lattice
        check = one_bounded_post(mode, post_function(post, cfg))
        for state in domain:
            check(state)
    table = {state: fn(state) for state in domain}
    logger.debug("%s tabulated over %d states (%d approximate loops)", mode, len(table), len(engine.approximations))
    return SemExpectation(
        table=table,
        cfg=cfg,
        mode=mode,
        approximations=list(engine.approximations),
        lower_bound=engine.sink_hits > 0,
        function=fn,
    )
