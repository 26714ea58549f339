"""Theorem-level checks: frame rule, duality principle and conservativity."""

import logging
from dataclasses import dataclass
from typing import Optional

from app.domain.expectation import (
    Expectation, ExtQ, OneMinus, SepCon, SLFormula, ZERO, compile_expectation, embed_sl,
    free_vars_expectation, ext_max,
)
from app.domain.state import ProgState, enumerate_states, heap_partitions
from app.domain.syntax import Program, is_loop_free, is_probabilistic, modified_vars
from app.models.enums import FrameDirection, Verdict
from app.models.errors import InputError
from app.models.schemas import DomainConfig

from .engine import transform
from .fixpoint import comparison_config
from .loops import CheckResult
from .modes import MODES, TransformerMode, WP

logger = logging.getLogger(__name__)


def check_frame(
    c: Program,
    x: Expectation,
    y: Expectation,
    cfg: DomainConfig,
    max_cells: int,
    *,
    mode: TransformerMode = WP,
    direction: FrameDirection = FrameDirection.SUB,
) -> CheckResult:
    """T⟦c⟧(X) ⋆ Y ⪯ T⟦c⟧(X ⋆ Y), or the converse with ``direction=SUPER``.

    The side condition Mod(c) ∩ Vars(Y) = ∅ is checked first.
    """
    clash = modified_vars(c) & free_vars_expectation(y)
    if clash:
        return CheckResult(
            Verdict.SIDE_CONDITION_VIOLATED,
            note=f"frame mentions modified variables {sorted(clash)}",
        )
    states = enumerate_states(cfg, max_cells)
    tx = transform(mode, c, x, cfg, max_cells)
    txy = transform(mode, c, SepCon(x, y), cfg, max_cells, states=states)
    frame = compile_expectation(y, cfg)

    for state in states:
        s, h = state
        framed = ext_max(tx[ProgState(s, h1)] * frame(s, h2) for h1, h2 in heap_partitions(h))
        whole = txy[state]
        lhs, rhs = (framed, whole) if direction is FrameDirection.SUB else (whole, framed)
        if rhs < lhs:
            logger.info("frame check (%s) fails at %s: %s vs %s", direction.value, state, framed, whole)
            return CheckResult(Verdict.COUNTEREXAMPLE, state, lhs, rhs)
    return CheckResult(Verdict.HOLDS)


# ═══════════════════════════════════════════════════════════════════════════════
# Duality
# ═══════════════════════════════════════════════════════════════════════════════

DUALITY_PAIRS = (("wp", "awlep"), ("wlp", "awep"), ("wep", "awlp"), ("wlep", "awp"))


@dataclass(frozen=True)
class DualityEntry:
    name: str  # e.g. "wp_awlep"
    result: CheckResult
    exact: bool
    residual: ExtQ


def check_duality(c: Program, f: Expectation, cfg: DomainConfig, max_cells: int) -> list[DualityEntry]:
    """T⟦c⟧(f) = 1 − T'⟦c⟧(1 − f) for each of the four dual pairs.

    Exact for loop-free programs; with loops the two sides may differ by
    twice the loop tolerance.
    """
    states = enumerate_states(cfg, max_cells)
    complement = OneMinus(f)
    exact_demanded = is_loop_free(c)
    solve_cfg = comparison_config(cfg)
    entries = []
    for left_name, right_name in DUALITY_PAIRS:
        left = transform(MODES[left_name], c, f, solve_cfg, max_cells, states=states)
        right = transform(MODES[right_name], c, complement, solve_cfg, max_cells, states=states)
        exact = exact_demanded and not left.approximations and not right.approximations
        bound = ExtQ(0 if exact else 2 * cfg.loop_tolerance)
        residual = ZERO
        failure: Optional[CheckResult] = None
        for state in states:
            lhs = left[state]
            rhs = right[state].one_minus()
            d = lhs.distance(rhs)
            if residual < d:
                residual = d
            if bound < d and failure is None:
                failure = CheckResult(Verdict.COUNTEREXAMPLE, state, lhs, rhs)
        entries.append(DualityEntry(
            name=f"{left_name}_{right_name}",
            result=failure or CheckResult(Verdict.HOLDS),
            exact=exact,
            residual=residual,
        ))
    return entries


# ═══════════════════════════════════════════════════════════════════════════════
# Conservativity
# ═══════════════════════════════════════════════════════════════════════════════

@dataclass(frozen=True)
class ConservativityResult:
    verdict: Verdict  # AGREE or DISAGREE
    qsl_valid: bool
    operational_valid: bool
    zero_one_valued: bool
    state: Optional[ProgState] = None
    note: Optional[str] = None


def check_conservativity(
    c: Program,
    pre: SLFormula,
    post: SLFormula,
    cfg: DomainConfig,
    max_cells: int,
) -> ConservativityResult:
    """Compare embed(pre) ⪯ wp⟦c⟧(embed(post)) with an operational triple check."""
    from app.domain.operational.checks import check_triple

    if is_probabilistic(c):
        raise InputError("conservativity is stated for non-probabilistic programs")
    states = enumerate_states(cfg, max_cells)
    wp = transform(WP, c, embed_sl(post), cfg, max_cells, states=states)
    pre_fn = compile_expectation(embed_sl(pre), cfg)

    zero_one = all(v == 0 or v == 1 for _, v in wp.items())
    witness: Optional[ProgState] = None
    for state in states:
        if wp[state] < pre_fn(state.stack, state.heap):
            witness = state
            break
    qsl_valid = witness is None

    triple = check_triple(c, pre, post, cfg, max_cells)
    agree = qsl_valid == triple.valid
    logger.info("conservativity: QSL %s, operational %s", qsl_valid, triple.valid)
    return ConservativityResult(
        verdict=Verdict.AGREE if agree else Verdict.DISAGREE,
        qsl_valid=qsl_valid,
        operational_valid=triple.valid,
        zero_one_valued=zero_one,
        state=witness or triple.state,
        note=triple.reason,
    )
