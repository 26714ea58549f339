"""Loop fixpoints and the invariant rules."""

import logging
from dataclasses import dataclass
from typing import Optional

from app.domain.expectation import Expectation, ExtQ
from app.domain.state import ProgState, enumerate_states
from app.domain.syntax import GuardExpr, Program, While, compile_guard
from app.models.enums import ExhaustionPolicy, InvariantDirection, Verdict
from app.models.errors import InputError
from app.models.schemas import DomainConfig

from .engine import (
    SemExpectation, Transformer, check_vars, needs_one_bounded, one_bounded_post, post_function, transform,
)
from .modes import TransformerMode, WP, WLP

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    """Verdict of a pointwise comparison, with the first violating state."""
    verdict: Verdict
    state: Optional[ProgState] = None
    lhs: Optional[ExtQ] = None
    rhs: Optional[ExtQ] = None
    note: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.verdict in (Verdict.HOLDS, Verdict.AGREE)


def loop_fixpoint(
    mode: TransformerMode,
    guard: GuardExpr,
    body: Program,
    post: Expectation,
    cfg: DomainConfig,
    max_cells: int,
    *,
    exhaustion: ExhaustionPolicy = ExhaustionPolicy.ERROR,
) -> SemExpectation:
    """lfp (total modes, from 0) or gfp (liberal modes, from 1) of the loop's characteristic functional."""
    result = transform(mode, While(guard, body), post, cfg, max_cells, exhaustion=exhaustion)
    logger.info("%s fixpoint of while loop: %s over %d states", mode, result.status.value, len(result))
    return result


def check_invariant(
    direction: InvariantDirection,
    guard: GuardExpr,
    body: Program,
    post: Expectation,
    invariant: Expectation,
    cfg: DomainConfig,
    max_cells: int,
    *,
    mode: Optional[TransformerMode] = None,
    exhaustion: ExhaustionPolicy = ExhaustionPolicy.ERROR,
) -> CheckResult:
    """Compare Φ(I) with I pointwise using one transform of the body.

    Upper invariants satisfy Φ(I) ⪯ I and bound the least fixed point from
    above; lower invariants satisfy I ⪯ Φ(I) and bound the greatest fixed
    point from below. The lower rule needs a liberal mode.
    """
    if mode is None:
        mode = WP if direction is InvariantDirection.UPPER else WLP
    if direction is InvariantDirection.LOWER and not mode.liberal:
        raise InputError(f"lower invariants need a liberal transformer, got {mode}")
    check_vars(While(guard, body), post, cfg)
    check_vars(body, invariant, cfg)

    engine = Transformer(mode, cfg, exhaustion=exhaustion)
    inv = post_function(invariant, cfg)
    post_fn = post_function(post, cfg)
    if needs_one_bounded(mode):
        inv, post_fn = one_bounded_post(mode, inv), one_bounded_post(mode, post_fn)
    body_of_inv = engine.apply(body, invariant)
    b = compile_guard(guard)

    for state in enumerate_states(cfg, max_cells):
        i_val = inv(state)
        phi = body_of_inv(state) if b(state.stack) else post_fn(state)
        lhs, rhs = (phi, i_val) if direction is InvariantDirection.UPPER else (i_val, phi)
        if rhs < lhs:
            logger.info("invariant check (%s) fails at %s: %s > %s", direction.value, state, lhs, rhs)
            return CheckResult(Verdict.COUNTEREXAMPLE, state, lhs, rhs)
    return CheckResult(Verdict.HOLDS)
