"""Checks built on the operational semantics: soundness, SL triples, sampling."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from app.domain.expectation import Expectation, ExtQ, SLFormula, compile_expectation, sl_satisfies
from app.domain.state import ProgState, enumerate_states
from app.domain.state.literals import render_state
from app.domain.syntax import Program, is_loop_free
from app.domain.transformer.engine import transform
from app.domain.transformer.fixpoint import comparison_config
from app.domain.transformer.loops import CheckResult
from app.domain.transformer.modes import WP
from app.models.enums import AllocPolicy, ExhaustionPolicy, OptimizationDirection, Verdict
from app.models.errors import InputError, WorkbenchError
from app.models.schemas import DomainConfig

from .mdp import build_fragment, expected_reward
from .semantics import Configuration, step

logger = logging.getLogger(__name__)


# ═══════════════════════════════════════════════════════════════════════════════
# Soundness: wp against the expected-reward oracle
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass
class SoundnessReport:
    result: CheckResult
    states: int
    exact: bool  # equality demanded, not agreement within tolerance
    max_deviation: ExtQ
    tolerance: Fraction


def soundness_check(
    c: Program,
    f: Expectation,
    cfg: DomainConfig,
    max_cells: int,
    tol: Optional[Fraction] = None,
    *,
    exhaustion: ExhaustionPolicy = ExhaustionPolicy.ERROR,
) -> SoundnessReport:
    """Compare wp⟦c⟧(f) with the minimal expected reward at every enumerated state.

    Loop-free programs must agree exactly; otherwise the two may differ by at
    most twice the tolerance.
    """
    tol = cfg.loop_tolerance if tol is None else tol
    states = enumerate_states(cfg, max_cells)
    solve_cfg = comparison_config(cfg.model_copy(update={"loop_tolerance": tol}))
    wp = transform(WP, c, f, solve_cfg, max_cells, exhaustion=exhaustion, states=states)
    oracle = expected_reward(
        OptimizationDirection.MIN, c, f, states, solve_cfg, solve_cfg.loop_tolerance, exhaustion=exhaustion,
    )
    exact = is_loop_free(c) and not wp.approximations
    bound = ExtQ(0 if exact else 2 * tol)

    worst = ExtQ(0)
    first: Optional[CheckResult] = None
    for state in states:
        lhs, rhs = wp[state], oracle.values[state]
        d = lhs.distance(rhs)
        if worst < d:
            worst = d
        if bound < d and first is None:
            first = CheckResult(Verdict.COUNTEREXAMPLE, state, lhs, rhs, note=f"|wp - ExpRew| = {d}")
    logger.info("soundness check over %d states: max deviation %s", len(states), worst)
    return SoundnessReport(
        result=first or CheckResult(Verdict.HOLDS),
        states=len(states),
        exact=exact,
        max_deviation=worst,
        tolerance=tol,
    )


# ═══════════════════════════════════════════════════════════════════════════════
# Total-correctness SL triples
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class TripleResult:
    valid: bool
    state: Optional[ProgState] = None
    reason: Optional[str] = None


def check_triple(c: Program, pre: SLFormula, post: SLFormula, cfg: DomainConfig, max_cells: int) -> TripleResult:
    """{pre} c {post} in the total-correctness sense, decided on the reachable fragment.

    Every execution from every enumerated pre-state must terminate without
    a memory fault, and every terminal state must satisfy post.
    """
    inits = [s for s in enumerate_states(cfg, max_cells) if sl_satisfies(s, pre, cfg)]
    if not inits:
        return TripleResult(True, reason="no enumerated state satisfies the precondition")
    fragment = build_fragment(c, inits, cfg)
    succ = [
        sorted({j for targets in acts.values() for _, j in targets})
        for acts in fragment.actions
    ]
    post_ok = {
        i: sl_satisfies(fragment.configs[i].state, post, cfg)
        for i in fragment.terminal_ids
    }

    for state, root in fragment.inits.items():
        reason = _first_defect(root, succ, fragment.configs, post_ok)
        if reason is not None:
            return TripleResult(False, state, reason)
    return TripleResult(True)


def _first_defect(root: int, succ: list[list[int]], configs: list[Configuration],
                  post_ok: dict[int, bool]) -> Optional[str]:
    """Iterative DFS: a reachable fault, a violated postcondition, or a cycle."""
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[int, int] = {}
    stack: list[tuple[int, int]] = [(root, 0)]
    color[root] = GREY
    while stack:
        node, k = stack.pop()
        conf = configs[node]
        if k == 0:
            if conf.faulted:
                return f"memory fault reachable ({render_state(conf.state)})"
            if conf.terminated and not post_ok[node]:
                return f"terminal state violates the postcondition ({render_state(conf.state)})"
        if k < len(succ[node]):
            stack.append((node, k + 1))
            nxt = succ[node][k]
            state = color.get(nxt, WHITE)
            if state == GREY:
                return "an execution does not terminate"
            if state == WHITE:
                color[nxt] = GREY
                stack.append((nxt, 0))
        else:
            color[node] = BLACK
    return None


# ═══════════════════════════════════════════════════════════════════════════════
# Sampling
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass
class SampleResult:
    mean: float
    samples: int
    faults: int = 0
    timeouts: int = 0
    errors: int = 0
    error_kinds: dict[str, int] = field(default_factory=dict)


def sample_run(
    c: Program,
    init: ProgState,
    f: Expectation,
    cfg: DomainConfig,
    alloc_policy: AllocPolicy = AllocPolicy.LOWEST,
    n_samples: int = 1000,
    seed: int = 0,
    max_steps: int = 10_000,
) -> SampleResult:
    """Monte-Carlo estimate of f at termination under a fixed allocation policy.

    Faulting, diverging (beyond ``max_steps``) and erroring runs contribute 0.
    """
    if n_samples < 1:
        raise InputError(f"n_samples must be at least 1, got {n_samples}")
    rng = np.random.default_rng(seed)
    reward = compile_expectation(f, cfg)
    rewards = np.zeros(n_samples)
    result = SampleResult(mean=0.0, samples=n_samples)

    for n in range(n_samples):
        conf = Configuration(c, init)
        try:
            for _ in range(max_steps):
                if conf.is_final:
                    break
                conf = _sample_step(conf, cfg, alloc_policy, rng)
            else:
                result.timeouts += 1
                continue
        except WorkbenchError as e:
            result.errors += 1
            result.error_kinds[e.kind] = result.error_kinds.get(e.kind, 0) + 1
            continue
        if conf.faulted:
            result.faults += 1
            continue
        rewards[n] = float(reward(conf.state.stack, conf.state.heap))

    result.mean = float(rewards.mean())
    logger.info("sampled %d runs: mean %.6f, %d faults, %d timeouts, %d errors",
                n_samples, result.mean, result.faults, result.timeouts, result.errors)
    return result


def _sample_step(conf: Configuration, cfg: DomainConfig, policy: AllocPolicy,
                 rng: np.random.Generator) -> Configuration:
    transitions = step(conf, cfg)
    actions = sorted({t.action for t in transitions})
    if len(actions) > 1:
        if policy is AllocPolicy.LOWEST:
            action = actions[0]
        elif policy is AllocPolicy.HIGHEST:
            action = actions[-1]
        else:
            action = actions[int(rng.integers(len(actions)))]
        transitions = tuple(t for t in transitions if t.action == action)
    if len(transitions) == 1:
        return transitions[0].target
    probs = np.array([float(t.prob) for t in transitions])
    k = rng.choice(len(transitions), p=probs / probs.sum())
    return transitions[int(k)].target
