"""Law suite runner: operand generation, exhaustive checking and witness replay."""

import fnmatch
import logging
import time
from contextlib import ExitStack
from fractions import Fraction
from typing import Any, Optional

from app.config import get_settings
from app.domain.expectation import (
    SLEmp, SLPure, SLPointsTo, SLAnd, SLNot, SLExists, SLStar, SLWand,
    broken_sepcon, parse_expectation, parse_sl_formula, render_expectation, render_sl_formula,
)
from app.domain.syntax import (
    And, Assign, Alloc, BinOp, BoolConst, Compare, Const, Free, Ite, Lookup, Mutate, Not, Or, PChoice,
    Seq, Skip, Uniform, Var, While,
    parse_arith, parse_guard, parse_program, render_arith, render_guard, render_program,
)
from app.domain.state import render_state
from app.models.errors import InputError, WorkbenchError
from app.models.schemas import GenSpec, LawReport, LawResult, LawViolation, Operand, parse_fraction

from .base import Law, LawContext, Witness
from .expectation_laws import EXPECTATION_LAWS
from .generators import ArtifactGenerator
from .transformer_laws import TRANSFORMER_LAWS

logger = logging.getLogger(__name__)

LAWS: dict[str, Law] = {law.law_id: law for law in EXPECTATION_LAWS + TRANSFORMER_LAWS}

BROKEN_SEPCON_HOOK = "broken_sepcon"
_ERROR_SAMPLES = 3

_PROGRAM_NODES = (Skip, Assign, Seq, Ite, While, PChoice, Alloc, Mutate, Lookup, Free, Uniform)
_SL_NODES = (SLPure, SLEmp, SLPointsTo, SLAnd, SLNot, SLExists, SLStar, SLWand)
_GUARD_NODES = (BoolConst, Compare, And, Or, Not)
_ARITH_NODES = (Const, Var, BinOp)


# ═══════════════════════════════════════════════════════════════════════════════
# Operand encoding
# ═══════════════════════════════════════════════════════════════════════════════

def encode_operand(value: Any) -> Operand:
    """Render an operand in concrete syntax, tagged with its kind."""
    if isinstance(value, _PROGRAM_NODES):
        return Operand(kind="program", text=render_program(value))
    if isinstance(value, _SL_NODES):
        return Operand(kind="sl", text=render_sl_formula(value))
    if isinstance(value, _GUARD_NODES):
        return Operand(kind="guard", text=render_guard(value))
    if isinstance(value, _ARITH_NODES):
        return Operand(kind="arith", text=render_arith(value))
    if isinstance(value, Fraction):
        return Operand(kind="scalar", text=str(value))
    if isinstance(value, str):
        return Operand(kind="var", text=value)
    return Operand(kind="expectation", text=render_expectation(value))


_DECODERS = {
    "program": parse_program,
    "sl": parse_sl_formula,
    "guard": parse_guard,
    "arith": parse_arith,
    "scalar": parse_fraction,
    "var": str,
    "expectation": parse_expectation,
}


def decode_operand(operand: Operand) -> Any:
    try:
        decoder = _DECODERS[operand.kind]
    except KeyError:
        raise InputError(f"unknown operand kind {operand.kind!r}", allowed=sorted(_DECODERS)) from None
    return decoder(operand.text)


# ═══════════════════════════════════════════════════════════════════════════════
# Selection and execution
# ═══════════════════════════════════════════════════════════════════════════════

def select_laws(selection: Optional[str] = None) -> list[Law]:
    """Laws matching a comma-separated list of glob patterns, in catalog order."""
    if not selection:
        return list(LAWS.values())
    patterns = [p.strip() for p in selection.split(",") if p.strip()]
    chosen = [law for law in LAWS.values() if any(fnmatch.fnmatchcase(law.law_id, p) for p in patterns)]
    if not chosen:
        raise InputError(f"no law matches {selection!r}", available=sorted(LAWS))
    return chosen


def _context(law: Law, spec: GenSpec) -> LawContext:
    cells = spec.domain.addr_count if law.full_heaps else spec.cells
    return LawContext(cfg=spec.domain, max_cells=cells)


def _violation(law: Law, trial: int, operands: dict[str, Any], witness: Witness, hooks: list[str]) -> LawViolation:
    return LawViolation(
        law_id=law.law_id,
        trial=trial,
        state=render_state(witness.state) if witness.state is not None else None,
        lhs=str(witness.lhs) if witness.lhs is not None else None,
        rhs=str(witness.rhs) if witness.rhs is not None else None,
        operands={name: encode_operand(value) for name, value in operands.items()},
        note=witness.note,
        hooks=list(hooks),
    )


def run_law(law: Law, spec: GenSpec, trials: int, hooks: list[str]) -> LawResult:
    result = LawResult(law_id=law.law_id, description=law.description)
    ctx = _context(law, spec)
    started = time.perf_counter()
    for trial in range(trials):
        gen = ArtifactGenerator.for_trial(spec, law.law_id, trial)
        operands = law.operands(gen)
        result.trials += 1
        try:
            witness = law.check(operands, ctx)
        except WorkbenchError as e:
            result.errors += 1
            if len(result.error_samples) < _ERROR_SAMPLES:
                result.error_samples.append(f"trial {trial}: {e}")
            logger.debug("%s trial %d raised %s", law.law_id, trial, e.code)
            continue
        if witness is not None:
            logger.warning("%s violated in trial %d at %s", law.law_id, trial, witness.state)
            result.violations.append(_violation(law, trial, operands, witness, hooks))
    result.elapsed = time.perf_counter() - started
    logger.info("%s: %d trials, %d violations, %d errors (%.2fs)",
                law.law_id, result.trials, len(result.violations), result.errors, result.elapsed)
    return result


def _hooks(stack: ExitStack, hooks: list[str]) -> None:
    for hook in hooks:
        if hook == BROKEN_SEPCON_HOOK:
            stack.enter_context(broken_sepcon())
        else:
            raise InputError(f"unknown debug hook {hook!r}", allowed=[BROKEN_SEPCON_HOOK])


def run_law_suite(
    selection: Optional[str] = None,
    spec: Optional[GenSpec] = None,
    trials: Optional[int] = None,
    *,
    broken: bool = False,
) -> LawReport:
    """Run every selected law for ``trials`` random operand draws.

    Args:
        selection: comma-separated glob patterns over law ids, all laws if empty
        spec: generation budgets and the bounded model
        trials: draws per law, defaulting to the configured count
        broken: evaluate ⋆ with the min debug hook, to confirm the suite notices

    Returns:
        LawReport with one result per law, in catalog order
    """
    settings = get_settings()
    spec = spec or GenSpec(
        seed=settings.law_seed, domain=settings.default_domain(), max_cells=settings.default_max_cells,
    )
    trials = settings.law_trials if trials is None else trials
    laws = select_laws(selection)
    hooks = [BROKEN_SEPCON_HOOK] if broken else []
    logger.info("running %d laws x %d trials (seed %d) on %s", len(laws), trials, spec.seed, spec.domain.describe())

    report = LawReport(seed=spec.seed, config=spec.domain)
    with ExitStack() as stack:
        _hooks(stack, hooks)
        for law in laws:
            report.results.append(run_law(law, spec, trials, hooks))
    return report


def replay_witness(violation: LawViolation, spec: GenSpec) -> Optional[Witness]:
    """Re-check a recorded violation from its rendered operands.

    Returns the fresh witness, or None if the law now holds on those operands.
    """
    law = LAWS.get(violation.law_id)
    if law is None:
        raise InputError(f"unknown law {violation.law_id!r}", available=sorted(LAWS))
    operands = {name: decode_operand(op) for name, op in violation.operands.items()}
    with ExitStack() as stack:
        _hooks(stack, violation.hooks)
        return law.check(operands, _context(law, spec))
