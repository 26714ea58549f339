"""Kleene iteration of a loop's characteristic functional over a growing state table."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from app.domain.expectation import ExtQ, ONE, ZERO
from app.domain.state import ProgState
from app.domain.state.literals import render_state
from app.models.errors import IterateNotMonotone, IterationBudgetExhausted
from app.models.schemas import DomainConfig

logger = logging.getLogger(__name__)

StateFun = Callable[[ProgState], ExtQ]

# Both sides of a comparison within 2·tol are solved at tol / COMPARISON_REFINEMENT.
COMPARISON_REFINEMENT = 100


def comparison_config(cfg: DomainConfig) -> DomainConfig:
    """cfg with the loop tolerance used for each side of a 2·tol comparison."""
    return cfg.model_copy(update={"loop_tolerance": cfg.loop_tolerance / COMPARISON_REFINEMENT})


@dataclass(frozen=True)
class Approximation:
    """A loop fixpoint that stopped on tolerance instead of stabilizing."""
    loop: str
    direction: str  # "below" for least fixed points, "above" for greatest
    residual: ExtQ
    iterations: int


class LoopSolver:
    """Solves Φ(Y) = [b]·T⟦body⟧(Y) + [¬b]·post on demand.

    The table holds the current iterate on every state queried so far and
    every state the body reaches from them. A query for an unknown state
    adds it at the bottom element and resumes iteration from the current
    table, which is still below (lfp) or above (gfp) the fixed point.
    Iterate k+1 reads only iterate k.
    """

    def __init__(
        self,
        guard: Callable[[ProgState], bool],
        body: Callable[[StateFun], StateFun],
        post: StateFun,
        cfg: DomainConfig,
        *,
        greatest: bool,
        label: str,
        on_approximate: Callable[[Approximation], None],
    ):
        self.guard = guard
        self.body = body
        self.post = post
        self.cfg = cfg
        self.greatest = greatest
        self.label = label
        self.on_approximate = on_approximate
        self.bottom = ONE if greatest else ZERO
        self.table: dict[ProgState, ExtQ] = {}
        self.iterations = 0

    def value(self, state: ProgState) -> ExtQ:
        v = self.table.get(state)
        if v is None:
            self.table[state] = self.bottom
            self._solve()
            v = self.table[state]
        return v

    def _solve(self) -> None:
        tol = self.cfg.loop_tolerance
        budget = self.cfg.loop_max_iters
        residual = ZERO
        for _ in range(budget):
            self.iterations += 1
            current = self.table
            pending: dict[ProgState, ExtQ] = {}

            def read(state: ProgState) -> ExtQ:
                v = current.get(state)
                if v is None:
                    v = pending.setdefault(state, self.bottom)
                return v

            step = self.body(read)
            nxt = {
                state: step(state) if self.guard(state) else self.post(state)
                for state in current
            }
            residual = self._check_and_measure(current, nxt, tol)
            grew = bool(pending)
            nxt.update(pending)
            self.table = nxt
            logger.debug("loop %s iteration %d: residual %s, %d states (+%d)",
                         self.label, self.iterations, residual, len(nxt), len(pending))
            if grew:
                continue
            if residual.is_zero():
                logger.debug("loop %s: exact fixpoint after %d iterations", self.label, self.iterations)
                return
            if residual <= tol:
                approx = Approximation(
                    loop=self.label,
                    direction="above" if self.greatest else "below",
                    residual=residual,
                    iterations=self.iterations,
                )
                logger.warning("loop %s: approximate fixpoint after %d iterations (residual %s, %s)",
                               self.label, self.iterations, residual, approx.direction)
                self.on_approximate(approx)
                return
        raise IterationBudgetExhausted(
            f"loop {self.label}",
            self.iterations,
            str(residual),
            last_iterate={render_state(s): str(v) for s, v in list(self.table.items())[:50]},
        )

    def _check_and_measure(self, current: dict[ProgState, ExtQ], nxt: dict[ProgState, ExtQ],
                           tol: Fraction) -> ExtQ:
        """Largest entry change; raises when consecutive iterates are not ordered."""
        residual = ZERO
        slack = ExtQ(tol)
        for state, old in current.items():
            new = nxt[state]
            lower, upper = (new, old) if self.greatest else (old, new)
            if upper < lower and slack < lower.distance(upper):
                raise IterateNotMonotone(
                    f"loop {self.label}: iterate decreased from {lower} to {upper} at {render_state(state)}"
                    if not self.greatest else
                    f"loop {self.label}: iterate increased from {upper} to {lower} at {render_state(state)}",
                    state=render_state(state), before=str(old), after=str(new),
                )
            d = old.distance(new)
            if residual < d:
                residual = d
        return residual
