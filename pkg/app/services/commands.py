"""Command execution shared by the CLI and the HTTP surface.

``execute_command`` resolves the bounded model, parses the artifacts a
command needs, runs it and packs the outcome into a CommandReport. Module
errors never escape: they are reported with their exit code.
"""

import json
import logging
from pathlib import Path
from typing import Any, Callable, Optional

from pydantic import ValidationError

from app.config import get_settings
from app.domain.casestudies import list_programs, program_source, run_case_study
from app.domain.expectation import (
    Expectation, ExtQ, compile_expectation, free_vars_expectation, parse_expectation, parse_sl_formula,
)
from app.domain.operational import expected_reward, export_fragment, soundness_check
from app.domain.state import ProgState, enumerate_states, parse_state_literal, render_state
from app.domain.syntax import Program, While, parse_program, program_vars, subprograms
from app.domain.transformer import (
    CheckResult, check_conservativity, check_duality, check_frame, check_invariant, mode_by_name, transform,
)
from app.laws import run_law_suite
from app.models.enums import (
    ExitCode, FrameDirection, InvariantDirection, OptimizationDirection, OutputFormat, Verdict,
)
from app.models.errors import InputError, WorkbenchError
from app.models.schemas import CommandReport, CommandRequest, DomainConfig, GenSpec, parse_fraction

logger = logging.getLogger(__name__)

COMMANDS = (
    "eval", "wp", "oracle", "check-soundness", "check-invariant", "check-frame",
    "check-duality", "check-conservativity", "laws", "casestudy",
)


# ═══════════════════════════════════════════════════════════════════════════════
# Inputs
# ═══════════════════════════════════════════════════════════════════════════════

def resolve_domain(req: CommandRequest, extra_vars: tuple[str, ...] = ()) -> DomainConfig:
    """Settings defaults, overridden by the config file, overridden by flags.

    When neither the file nor the flags name the variables, the variables
    the command's artifacts mention are added to the default set.
    """
    settings = get_settings()
    cfg = settings.default_domain()
    named_vars = req.domain.vars is not None
    try:
        if req.config_file:
            path = Path(req.config_file)
            if not path.exists():
                raise InputError(f"config file not found: {req.config_file}")
            text = path.read_text(encoding="utf-8")
            named_vars = named_vars or any(
                token.startswith("vars=") for line in text.splitlines() for token in line.split("#", 1)[0].split()
            )
            cfg = DomainConfig.from_text(text, base=cfg)
        flags = req.domain.model_dump(exclude_none=True)
        update = {
            "vars": flags.get("vars"),
            "vmin": flags.get("vmin"),
            "vmax": flags.get("vmax"),
            "addr_count": flags.get("addrs"),
            "loop_max_iters": flags.get("loop_max_iters"),
            "loop_tolerance": flags.get("loop_tol"),
        }
        data = cfg.model_dump()
        data.update({k: v for k, v in update.items() if v is not None})
        cfg = DomainConfig(**data)
        if not named_vars and extra_vars:
            cfg = cfg.with_vars(*sorted(extra_vars))
            cfg = DomainConfig(**cfg.model_dump())
    except ValidationError as e:
        raise InputError(f"invalid domain configuration: {e.errors()[0]['msg']}") from e
    return cfg


def load_program_text(req: CommandRequest) -> Program:
    if req.program_text:
        return parse_program(req.program_text)
    if not req.program:
        raise InputError(f"command {req.command!r} needs a program (--prog)")
    path = Path(req.program)
    if path.exists():
        return parse_program(path.read_text(encoding="utf-8"))
    if req.program in list_programs():
        return parse_program(program_source(req.program))
    raise InputError(f"program file not found: {req.program}", bundled=list_programs())


def _need(value: Optional[str], flag: str, command: str) -> str:
    if not value:
        raise InputError(f"command {command!r} needs --{flag}")
    return value


def _max_cells(req: CommandRequest, cfg: DomainConfig) -> int:
    cells = get_settings().default_max_cells if req.max_cells is None else req.max_cells
    if cells < 0:
        raise InputError(f"max cells must be nonnegative, got {cells}")
    return min(cells, cfg.addr_count)


def _states(req: CommandRequest, cfg: DomainConfig) -> list[ProgState]:
    if req.states:
        return [parse_state_literal(text, cfg) for text in req.states]
    return list(enumerate_states(cfg, _max_cells(req, cfg)))


def _witness(result: CheckResult) -> dict[str, Any]:
    return {
        "verdict": result.verdict.value,
        "state": render_state(result.state) if result.state is not None else None,
        "lhs": str(result.lhs) if result.lhs is not None else None,
        "rhs": str(result.rhs) if result.rhs is not None else None,
        "note": result.note,
    }


def _table(values: dict[ProgState, ExtQ], states: list[ProgState]) -> list[dict[str, Any]]:
    return [{"state": render_state(s), "value": str(values[s])} for s in states]


# ═══════════════════════════════════════════════════════════════════════════════
# Handlers
# ═══════════════════════════════════════════════════════════════════════════════

def _eval(req: CommandRequest, report: CommandReport) -> None:
    e = parse_expectation(_need(req.expr, "expr", req.command))
    cfg = resolve_domain(req, tuple(free_vars_expectation(e)))
    f = compile_expectation(e, cfg)
    states = _states(req, cfg)
    report.config = cfg.model_dump(mode="json")
    report.results = [{"state": render_state(s), "value": str(f(s.stack, s.heap))} for s in states]


def _program_and_post(req: CommandRequest) -> tuple[Program, Expectation, DomainConfig]:
    c = load_program_text(req)
    post = parse_expectation(_need(req.post, "post", req.command))
    cfg = resolve_domain(req, tuple(program_vars(c) | free_vars_expectation(post)))
    return c, post, cfg


def _wp(req: CommandRequest, report: CommandReport) -> None:
    c, post, cfg = _program_and_post(req)
    mode = mode_by_name(req.mode)
    states = _states(req, cfg)
    result = transform(
        mode, c, post, cfg, _max_cells(req, cfg),
        literal_heap_rules=req.literal_heap_rules, states=states,
    )
    report.config = cfg.model_dump(mode="json")
    report.results = _table(result.table, states)
    if result.approximations:
        report.residual = str(result.residual)
        report.results.append({"status": result.status.value, "direction": result.direction})
    if result.lower_bound:
        report.results.append({"note": "exhausted allocations contributed 0; values are lower bounds"})


def _oracle(req: CommandRequest, report: CommandReport) -> None:
    c, post, cfg = _program_and_post(req)
    try:
        direction = OptimizationDirection(req.direction or "min")
    except ValueError:
        raise InputError(f"oracle direction must be min or max, got {req.direction!r}") from None
    tol = parse_fraction(req.tol) if req.tol else None
    states = _states(req, cfg)
    result = expected_reward(direction, c, post, states, cfg, tol)
    report.config = cfg.model_dump(mode="json")
    report.results = _table(result.values, states)
    report.results.append({
        "status": result.status.value,
        "iterations": result.iterations,
        "configurations": len(result.fragment),
    })
    report.residual = str(result.residual)
    if req.export:
        try:
            Path(req.export).write_text(json.dumps(export_fragment(result.fragment, result.table), indent=2))
        except OSError as e:
            raise InputError(f"cannot write fragment export {req.export}: {e.strerror}") from None
        logger.info("fragment of %d configurations written to %s", len(result.fragment), req.export)
        report.results.append({"export": req.export})


def _check_soundness(req: CommandRequest, report: CommandReport) -> None:
    c, post, cfg = _program_and_post(req)
    tol = parse_fraction(req.tol) if req.tol else None
    sound = soundness_check(c, post, cfg, _max_cells(req, cfg), tol)
    report.config = cfg.model_dump(mode="json")
    report.results = [{
        "verdict": sound.result.verdict.value,
        "states": sound.states,
        "exact": sound.exact,
        "max_deviation": str(sound.max_deviation),
    }]
    report.residual = str(sound.max_deviation)
    _record(report, sound.result)


def _check_invariant(req: CommandRequest, report: CommandReport) -> None:
    c, post, cfg = _program_and_post(req)
    inv = parse_expectation(_need(req.inv, "inv", req.command))
    cfg = resolve_domain(req, tuple(program_vars(c) | free_vars_expectation(post) | free_vars_expectation(inv)))
    loop = next((p for p in subprograms(c) if isinstance(p, While)), None)
    if loop is None:
        raise InputError("check-invariant needs a program containing a while loop")
    try:
        direction = InvariantDirection(req.direction or "upper")
    except ValueError:
        raise InputError(f"invariant direction must be upper or lower, got {req.direction!r}") from None
    # lower invariants default to wlp
    lower_default = direction is InvariantDirection.LOWER and req.mode == "wp"
    mode = None if lower_default else mode_by_name(req.mode)
    result = check_invariant(direction, loop.guard, loop.body, post, inv, cfg, _max_cells(req, cfg), mode=mode)
    report.config = cfg.model_dump(mode="json")
    report.results = [{"direction": direction.value, "verdict": result.verdict.value}]
    _record(report, result)


def _check_frame(req: CommandRequest, report: CommandReport) -> None:
    c, post, cfg = _program_and_post(req)
    frame = parse_expectation(_need(req.frame, "frame", req.command))
    cfg = resolve_domain(req, tuple(program_vars(c) | free_vars_expectation(post) | free_vars_expectation(frame)))
    try:
        direction = FrameDirection(req.direction or "sub")
    except ValueError:
        raise InputError(f"frame direction must be sub or super, got {req.direction!r}") from None
    result = check_frame(c, post, frame, cfg, _max_cells(req, cfg), mode=mode_by_name(req.mode), direction=direction)
    report.config = cfg.model_dump(mode="json")
    report.results = [{"direction": direction.value, "verdict": result.verdict.value, "note": result.note}]
    _record(report, result)


def _check_duality(req: CommandRequest, report: CommandReport) -> None:
    c, post, cfg = _program_and_post(req)
    entries = check_duality(c, post, cfg, _max_cells(req, cfg))
    report.config = cfg.model_dump(mode="json")
    report.results = [
        {"pair": e.name, "verdict": e.result.verdict.value, "exact": e.exact, "residual": str(e.residual)}
        for e in entries
    ]
    for e in entries:
        _record(report, e.result)


def _check_conservativity(req: CommandRequest, report: CommandReport) -> None:
    c = load_program_text(req)
    pre = parse_sl_formula(_need(req.pre, "pre", req.command))
    post = parse_sl_formula(_need(req.post, "post", req.command))
    cfg = resolve_domain(req, tuple(program_vars(c)))
    result = check_conservativity(c, pre, post, cfg, _max_cells(req, cfg))
    report.config = cfg.model_dump(mode="json")
    report.results = [{
        "verdict": result.verdict.value,
        "qsl_valid": result.qsl_valid,
        "operational_valid": result.operational_valid,
        "zero_one_valued": result.zero_one_valued,
    }]
    if result.verdict is Verdict.DISAGREE or not result.zero_one_valued:
        report.witnesses = [{
            "verdict": result.verdict.value,
            "state": render_state(result.state) if result.state is not None else None,
            "note": result.note,
        }]
        report.exit_code = ExitCode.VIOLATION


def _laws(req: CommandRequest, report: CommandReport) -> None:
    settings = get_settings()
    cfg = resolve_domain(req)
    spec = GenSpec(
        seed=settings.law_seed if req.seed is None else req.seed,
        max_cells=settings.default_max_cells if req.max_cells is None else req.max_cells,
        domain=cfg,
    )
    law_report = run_law_suite(req.laws, spec, req.trials, broken=req.broken_sepcon)
    report.config = cfg.model_dump(mode="json")
    report.results = [
        r.model_dump(mode="json", exclude={"violations"}) | {"violations": len(r.violations)}
        for r in law_report.results
    ]
    violations = [v.model_dump(mode="json") for r in law_report.results for v in r.violations]
    if violations:
        report.witnesses = violations
        report.exit_code = ExitCode.VIOLATION


def _casestudy(req: CommandRequest, report: CommandReport) -> None:
    name = _need(req.casestudy, "casestudy", req.command)
    result = run_case_study(name, size=req.size, p=req.p)
    report.config = result.config.model_dump(mode="json")
    report.results = [result.as_dict()]
    if not result.holds:
        report.exit_code = ExitCode.VIOLATION


def _record(report: CommandReport, result: CheckResult) -> None:
    if result.verdict is Verdict.COUNTEREXAMPLE:
        report.witnesses = (report.witnesses or []) + [_witness(result)]
        report.exit_code = ExitCode.VIOLATION
    elif result.verdict is Verdict.SIDE_CONDITION_VIOLATED:
        raise InputError(result.note or "side condition violated")


_HANDLERS: dict[str, Callable[[CommandRequest, CommandReport], None]] = {
    "eval": _eval,
    "wp": _wp,
    "oracle": _oracle,
    "check-soundness": _check_soundness,
    "check-invariant": _check_invariant,
    "check-frame": _check_frame,
    "check-duality": _check_duality,
    "check-conservativity": _check_conservativity,
    "laws": _laws,
    "casestudy": _casestudy,
}


def execute_command(req: CommandRequest) -> CommandReport:
    """Run one command; the report's exit code is 0, 1 on a failed check, or the error's code."""
    report = CommandReport(command=req.command)
    handler = _HANDLERS.get(req.command)
    logger.info("command %s started", req.command)
    try:
        if handler is None:
            raise InputError(f"unknown command {req.command!r}", allowed=list(COMMANDS))
        handler(req, report)
    except WorkbenchError as e:
        logger.error("command %s failed: %s", req.command, e)
        report.error = e.to_dict()
        report.exit_code = e.code
    logger.info("command %s finished with exit code %d", req.command, int(report.exit_code))
    return report


# ═══════════════════════════════════════════════════════════════════════════════
# Text rendering
# ═══════════════════════════════════════════════════════════════════════════════

def render_text(report: CommandReport) -> str:
    """Human-readable rendering of a report; JSON output uses ``render_json``."""
    lines: list[str] = []
    if report.error:
        lines.append(f"error ({report.error['kind']}): {report.error['message']}")
        return "\n".join(lines)
    results = report.results
    single = len(results) == 1 and set(results[0]) == {"state", "value"}
    for row in results:
        if single:
            lines.append(row["value"])
        elif set(row) == {"state", "value"}:
            lines.append(f"{row['state']}  ->  {row['value']}")
        else:
            lines.append("  ".join(f"{k}={_short(v)}" for k, v in row.items() if v is not None))
    if report.residual is not None:
        lines.append(f"residual {report.residual}")
    for w in report.witnesses or []:
        lines.append("witness: " + "  ".join(f"{k}={_short(v)}" for k, v in w.items() if v not in (None, [], {})))
    return "\n".join(lines)


def _short(value: Any) -> str:
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_short(v)}" for k, v in value.items()) + "}"
    if isinstance(value, list):
        return "[" + ", ".join(_short(v) for v in value) + "]"
    return str(value)


def render(report: CommandReport, output: OutputFormat) -> str:
    return report.render_json() if output is OutputFormat.JSON else render_text(report)
