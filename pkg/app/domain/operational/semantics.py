"""Small-step execution relation of hpGCL over the bounded model."""

from collections import defaultdict
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Union

from app.domain.state import ProgState, block_heap, check_value, disjoint_union, free_blocks, store_var
from app.domain.state.literals import render_heap
from app.domain.syntax import (
    Program, Skip, Assign, Seq, Ite, While, PChoice, Alloc, Mutate, Lookup, Free, Uniform,
    compile_arith, compile_guard, render_program,
)
from app.models.errors import AddressSpaceExhausted, UniformRangeError
from app.models.schemas import DomainConfig


class Control(str, Enum):
    """Control of a configuration that has left the program."""
    TERMINATED = "terminated"
    FAULT = "fault"


class Configuration(NamedTuple):
    control: Union[Program, Control]
    state: ProgState

    @property
    def is_final(self) -> bool:
        return isinstance(self.control, Control)

    @property
    def terminated(self) -> bool:
        return self.control is Control.TERMINATED

    @property
    def faulted(self) -> bool:
        return self.control is Control.FAULT

    def render_control(self) -> str:
        if isinstance(self.control, Control):
            return self.control.value.upper()
        return render_program(self.control)


class Transition(NamedTuple):
    action: int  # 0, or the base address an allocation picked
    prob: Fraction
    target: Configuration


def step(conf: Configuration, cfg: DomainConfig) -> tuple[Transition, ...]:
    """All transitions out of ``conf``; final configurations have none.

    Parallel edges with equal action and target are merged by summing their
    probabilities, and zero-probability edges are dropped.
    """
    if conf.is_final:
        return ()
    raw = _step(conf.control, conf.state, cfg)
    merged: dict[tuple[int, Configuration], Fraction] = defaultdict(Fraction)
    for t in raw:
        if t.prob:
            merged[(t.action, t.target)] += t.prob
    return tuple(Transition(action, prob, target) for (action, target), prob in merged.items())


def _done(state: ProgState) -> Configuration:
    return Configuration(Control.TERMINATED, state)


def _fault(state: ProgState) -> Configuration:
    return Configuration(Control.FAULT, state)


def _step(c: Program, state: ProgState, cfg: DomainConfig) -> list[Transition]:
    s, h = state
    one = Fraction(1)

    if isinstance(c, Skip):
        return [Transition(0, one, _done(state))]

    if isinstance(c, Assign):
        return [Transition(0, one, _done(store_var(cfg, state, c.var, compile_arith(c.expr)(s))))]

    if isinstance(c, Seq):
        result = []
        for t in _step(c.first, state, cfg):
            target = t.target
            if target.terminated:
                target = Configuration(c.second, target.state)
            elif not target.faulted:
                target = Configuration(Seq(target.control, c.second), target.state)
            result.append(Transition(t.action, t.prob, target))
        return result

    if isinstance(c, Ite):
        branch = c.then if compile_guard(c.guard)(s) else c.orelse
        return [Transition(0, one, Configuration(branch, state))]

    if isinstance(c, While):
        if compile_guard(c.guard)(s):
            return [Transition(0, one, Configuration(Seq(c.body, c), state))]
        return [Transition(0, one, _done(state))]

    if isinstance(c, PChoice):
        return [
            Transition(0, c.prob, Configuration(c.left, state)),
            Transition(0, 1 - c.prob, Configuration(c.right, state)),
        ]

    if isinstance(c, Uniform):
        low, high = compile_arith(c.low)(s), compile_arith(c.high)(s)
        if low > high:
            raise UniformRangeError(low, high)
        p = Fraction(1, high - low + 1)
        return [Transition(0, p, _done(store_var(cfg, state, c.var, v))) for v in range(low, high + 1)]

    if isinstance(c, Alloc):
        values = [check_value(cfg, "new", compile_arith(e)(s)) for e in c.exprs]
        bases = free_blocks(cfg, h, len(values))
        if not bases:
            raise AddressSpaceExhausted(len(values), cfg.addr_count, render_heap(h))
        return [
            Transition(u, one, _done(ProgState(store_var(cfg, state, c.var, u).stack,
                                               disjoint_union(h, block_heap(u, values)))))
            for u in bases
        ]

    if isinstance(c, Free):
        a = compile_arith(c.addr)(s)
        if a not in h:
            return [Transition(0, one, _fault(state))]
        return [Transition(0, one, _done(state.with_heap(h.without(a))))]

    if isinstance(c, Mutate):
        a = compile_arith(c.addr)(s)
        if a not in h:
            return [Transition(0, one, _fault(state))]
        v = check_value(cfg, f"<{a}>", compile_arith(c.value)(s))
        return [Transition(0, one, _done(state.with_heap(h.updated(a, v))))]

    if isinstance(c, Lookup):
        a = compile_arith(c.addr)(s)
        if a not in h:
            return [Transition(0, one, _fault(state))]
        return [Transition(0, one, _done(store_var(cfg, state, c.var, h[a])))]

    raise TypeError(f"not a program: {c!r}")
