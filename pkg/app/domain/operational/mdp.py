"""Reachable MDP fragments and the expected-reward oracle."""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional

from app.config import get_settings
from app.domain.expectation import Expectation, ExtQ, ZERO, compile_expectation, ext_max, ext_min
from app.domain.state import ProgState
from app.domain.state.literals import render_state
from app.domain.syntax import Program
from app.models.enums import AllocPolicy, ExhaustionPolicy, FixpointStatus, OptimizationDirection
from app.models.errors import (
    AddressSpaceExhausted, FragmentTooLarge, InputError, IterateNotMonotone, IterationBudgetExhausted,
)
from app.models.schemas import DomainConfig

from .semantics import Configuration, Transition, step

logger = logging.getLogger(__name__)


@dataclass
class MDPFragment:
    """The configurations reachable from a set of initial states.

    ``actions[i]`` maps each enabled action of configuration i to its
    (probability, target index) edges. Final configurations and sinks have
    no actions.
    """
    program: Program
    configs: list[Configuration] = field(default_factory=list)
    index: dict[Configuration, int] = field(default_factory=dict)
    actions: list[dict[int, list[tuple[Fraction, int]]]] = field(default_factory=list)
    inits: dict[ProgState, int] = field(default_factory=dict)
    sinks: set[int] = field(default_factory=set)

    def __len__(self) -> int:
        return len(self.configs)

    def _add(self, conf: Configuration) -> tuple[int, bool]:
        i = self.index.get(conf)
        if i is not None:
            return i, False
        i = self.index[conf] = len(self.configs)
        self.configs.append(conf)
        self.actions.append({})
        return i, True

    @property
    def terminal_ids(self) -> list[int]:
        return [i for i, conf in enumerate(self.configs) if conf.terminated]

    @property
    def fault_ids(self) -> list[int]:
        return [i for i, conf in enumerate(self.configs) if conf.faulted]


def _restrict(transitions: tuple[Transition, ...], policy: Optional[AllocPolicy]) -> tuple[Transition, ...]:
    if policy is None:
        return transitions
    actions = {t.action for t in transitions}
    if len(actions) <= 1:
        return transitions
    chosen = min(actions) if policy is AllocPolicy.LOWEST else max(actions)
    return tuple(t for t in transitions if t.action == chosen)


def build_fragment(
    c: Program,
    inits: Iterable[ProgState],
    cfg: DomainConfig,
    *,
    cap: Optional[int] = None,
    exhaustion: ExhaustionPolicy = ExhaustionPolicy.ERROR,
    alloc_policy: Optional[AllocPolicy] = None,
) -> MDPFragment:
    """Breadth-first construction of the reachable fragment.

    With the sink exhaustion policy an allocation that finds no free block
    turns its configuration into a reward-0 sink. ``alloc_policy`` keeps
    only the lowest or highest allocation action.
    """
    if alloc_policy is AllocPolicy.SEEDED_RANDOM:
        raise InputError("the oracle restricts allocation to the lowest or highest block only")
    cap = cap or get_settings().oracle_max_configs
    fragment = MDPFragment(program=c)
    queue: deque[int] = deque()
    for state in inits:
        i, new = fragment._add(Configuration(c, state))
        fragment.inits[state] = i
        if new:
            queue.append(i)

    while queue:
        i = queue.popleft()
        conf = fragment.configs[i]
        try:
            transitions = _restrict(step(conf, cfg), alloc_policy)
        except AddressSpaceExhausted:
            if exhaustion is not ExhaustionPolicy.SINK:
                raise
            fragment.sinks.add(i)
            continue
        edges = fragment.actions[i]
        for t in transitions:
            j, new = fragment._add(t.target)
            edges.setdefault(t.action, []).append((t.prob, j))
            if new:
                queue.append(j)
        if len(fragment.configs) > cap:
            raise FragmentTooLarge(cap, len(queue))

    logger.debug("fragment: %d configurations, %d terminal, %d faults, %d sinks",
                 len(fragment), len(fragment.terminal_ids), len(fragment.fault_ids), len(fragment.sinks))
    return fragment


@dataclass
class OracleResult:
    """Expected rewards at the initial states of a fragment."""
    values: dict[ProgState, ExtQ]
    status: FixpointStatus
    residual: ExtQ
    iterations: int
    fragment: MDPFragment
    table: list[ExtQ]

    @property
    def lower_bound(self) -> bool:
        """Sinks contributed 0, so the values bound the unbounded-memory values from below."""
        return bool(self.fragment.sinks)


def expected_reward(
    direction: OptimizationDirection,
    c: Program,
    f: Expectation,
    inits: Iterable[ProgState],
    cfg: DomainConfig,
    tol: Optional[Fraction] = None,
    *,
    cap: Optional[int] = None,
    max_iters: Optional[int] = None,
    exhaustion: ExhaustionPolicy = ExhaustionPolicy.ERROR,
    alloc_policy: Optional[AllocPolicy] = None,
) -> OracleResult:
    """Min (demonic) or max (angelic) expected reward of successful termination.

    Value iteration from V0 = rew on terminal configurations and 0 elsewhere.
    Stops when an iteration changes nothing, or when the largest change is at
    most ``tol`` (the values are then below the true ones).
    """
    tol = cfg.loop_tolerance if tol is None else tol
    max_iters = max_iters or get_settings().oracle_max_iters
    fragment = build_fragment(c, inits, cfg, cap=cap, exhaustion=exhaustion, alloc_policy=alloc_policy)
    reward = compile_expectation(f, cfg)
    combine = ext_min if direction is OptimizationDirection.MIN else ext_max

    rew = [
        reward(conf.state.stack, conf.state.heap) if conf.terminated else ZERO
        for conf in fragment.configs
    ]
    active = [i for i, acts in enumerate(fragment.actions) if acts]
    edges = [
        (i, [[(ExtQ(p), j) for p, j in targets] for targets in fragment.actions[i].values()])
        for i in active
    ]
    values = list(rew)
    slack = ExtQ(tol)
    residual = ZERO

    for iteration in range(1, max_iters + 1):
        nxt = list(values)
        residual = ZERO
        for i, per_action in edges:
            v = combine(sum((p * values[j] for p, j in targets), ZERO) for targets in per_action)
            old = values[i]
            if v < old and slack < v.distance(old):
                raise IterateNotMonotone(
                    f"value iteration decreased from {old} to {v}",
                    config=fragment.configs[i].render_control(), state=render_state(fragment.configs[i].state),
                )
            d = v.distance(old)
            if residual < d:
                residual = d
            nxt[i] = v
        values = nxt
        if residual.is_zero():
            status = FixpointStatus.EXACT
            break
        if residual <= tol:
            status = FixpointStatus.APPROXIMATE
            logger.warning("oracle stopped on tolerance after %d iterations (residual %s)", iteration, residual)
            break
    else:
        raise IterationBudgetExhausted("value iteration", max_iters, str(residual))

    logger.info("oracle (%s): %d configurations, %s after %d iterations",
                direction.value, len(fragment), status.value, iteration)
    return OracleResult(
        values={state: values[i] for state, i in fragment.inits.items()},
        status=status,
        residual=residual,
        iterations=iteration,
        fragment=fragment,
        table=values,
    )


def export_fragment(fragment: MDPFragment, values: Optional[list[ExtQ]] = None) -> dict[str, Any]:
    """JSON-ready dump of a fragment and optionally its value table."""
    configurations = []
    for i, conf in enumerate(fragment.configs):
        entry: dict[str, Any] = {
            "id": i,
            "control": conf.render_control(),
            "state": render_state(conf.state),
            "transitions": [
                {"action": action, "prob": str(p), "target": j}
                for action, targets in sorted(fragment.actions[i].items())
                for p, j in targets
            ],
        }
        if i in fragment.sinks:
            entry["sink"] = True
        if values is not None:
            entry["value"] = str(values[i])
        configurations.append(entry)
    return {
        "inits": {render_state(s): i for s, i in fragment.inits.items()},
        "configurations": configurations,
    }
