"""Pydantic models for the QSL verification workbench."""

import re
from fractions import Fraction
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from .enums import ExitCode, OutputFormat
from .errors import InputError

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def parse_fraction(raw: Any) -> Fraction:
    """Parse `num/den`, decimals, ints or Fractions into an exact Fraction."""
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, bool):
        raise InputError(f"not a rational: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        return Fraction(str(raw))
    try:
        return Fraction(str(raw).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"not a rational: {raw!r}") from e


# ═══════════════════════════════════════════════════════════════════════════════
# Bounded model
# ═══════════════════════════════════════════════════════════════════════════════

class DomainConfig(BaseModel):
    """The bounded model: variables, value interval V, addresses 1..A, loop solver settings."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vars: tuple[str, ...] = ("x", "y")
    vmin: int = -1
    vmax: int = 4
    addr_count: int = Field(default=3, ge=1)  # addresses are 1..A
    loop_max_iters: int = Field(default=10_000, ge=1)
    loop_tolerance: Fraction = Fraction(1, 1_000_000)

    @field_validator("vars", mode="before")
    @classmethod
    def _split_vars(cls, v: Any) -> Any:
        if isinstance(v, str):
            v = [name.strip() for name in v.split(",") if name.strip()]
        return tuple(v)

    @field_validator("loop_tolerance", mode="before")
    @classmethod
    def _parse_tolerance(cls, v: Any) -> Fraction:
        return parse_fraction(v)

    @model_validator(mode="after")
    def _check_invariants(self) -> "DomainConfig":
        if not self.vars:
            raise ValueError("vars must be nonempty")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"duplicate variables in {list(self.vars)}")
        for name in self.vars:
            if not _IDENT.match(name):
                raise ValueError(f"not a variable name: {name!r}")
        if not self.vmin <= 0 <= self.vmax:
            raise ValueError(f"V = [{self.vmin}, {self.vmax}] must contain 0")
        if self.addr_count > self.vmax:
            raise ValueError(f"addresses 1..{self.addr_count} must be storable (A <= vmax = {self.vmax})")
        if self.loop_tolerance < 0:
            raise ValueError("loop_tolerance must be nonnegative")
        return self

    @field_serializer("loop_tolerance")
    def _dump_tolerance(self, v: Fraction) -> str:
        return str(v)

    @property
    def values(self) -> range:
        return range(self.vmin, self.vmax + 1)

    @property
    def addresses(self) -> range:
        return range(1, self.addr_count + 1)

    def in_domain(self, value: int) -> bool:
        return self.vmin <= value <= self.vmax

    def with_vars(self, *names: str) -> "DomainConfig":
        """Copy of this config whose variable set also contains ``names``."""
        merged = tuple(self.vars) + tuple(n for n in names if n not in self.vars)
        return self.model_copy(update={"vars": merged})

    def describe(self) -> str:
        return (
            f"vars={','.join(self.vars)} vmin={self.vmin} vmax={self.vmax} "
            f"addrs={self.addr_count} loop_max_iters={self.loop_max_iters} loop_tol={self.loop_tolerance}"
        )

    @classmethod
    def from_text(cls, text: str, base: Optional["DomainConfig"] = None) -> "DomainConfig":
        """Parse the ``key=value`` config format (whitespace or newline separated, ``#`` comments)."""
        keys = {
            "vars": "vars", "vmin": "vmin", "vmax": "vmax", "addrs": "addr_count",
            "loop_max_iters": "loop_max_iters", "loop_tol": "loop_tolerance",
        }
        update: dict[str, Any] = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0]
            for token in line.split():
                if "=" not in token:
                    raise InputError(f"config entry without '=': {token!r}")
                key, value = token.split("=", 1)
                if key not in keys:
                    raise InputError(f"unknown config key {key!r}", allowed=sorted(keys))
                update[keys[key]] = value
        data = (base or cls()).model_dump()
        data.update(update)
        try:
            return cls.model_validate(data)
        except ValueError as e:
            raise InputError(f"invalid domain config: {e}") from e


# ═══════════════════════════════════════════════════════════════════════════════
# Law bench
# ═══════════════════════════════════════════════════════════════════════════════

class GenSpec(BaseModel):
    """Budgets and toggles for random artifact generation."""
    model_config = ConfigDict(frozen=True)

    seed: int = 0
    expr_depth: int = Field(default=3, ge=0)
    heap_cells: int = Field(default=2, ge=0)
    program_length: int = Field(default=4, ge=1)
    allow_infinity: bool = False
    allow_loops: bool = False
    allow_alloc: bool = True
    max_cells: Optional[int] = None  # defaults to A
    domain: DomainConfig = DomainConfig()

    @property
    def cells(self) -> int:
        return self.domain.addr_count if self.max_cells is None else self.max_cells


class Operand(BaseModel):
    """A rendered law operand, re-parseable for witness replay."""
    kind: str  # expectation | predicate | program | sl | guard | scalar | var
    text: str


class LawViolation(BaseModel):
    """A witnessed violation of a law."""
    law_id: str
    trial: int
    state: Optional[str] = None
    lhs: Optional[str] = None
    rhs: Optional[str] = None
    operands: dict[str, Operand] = {}
    note: Optional[str] = None
    hooks: list[str] = []


class LawResult(BaseModel):
    """Per-law outcome of a suite run."""
    law_id: str
    description: str
    trials: int = 0
    violations: list[LawViolation] = []
    errors: int = 0
    error_samples: list[str] = []
    elapsed: float = 0.0


class LawReport(BaseModel):
    """Aggregated outcome of run_law_suite."""
    seed: int
    config: DomainConfig
    results: list[LawResult] = []

    @property
    def total_violations(self) -> int:
        return sum(len(r.violations) for r in self.results)


# ═══════════════════════════════════════════════════════════════════════════════
# Commands
# ═══════════════════════════════════════════════════════════════════════════════

class DomainOverrides(BaseModel):
    """Domain flags given on the command line; unset fields fall back to the config file or settings."""
    vars: Optional[str] = None
    vmin: Optional[int] = None
    vmax: Optional[int] = None
    addrs: Optional[int] = None
    loop_max_iters: Optional[int] = None
    loop_tol: Optional[str] = None


class CommandRequest(BaseModel):
    """One workbench command, as parsed from the CLI or posted to the API."""
    command: str = ""  # set by the route for the per-command endpoints
    program: Optional[str] = None        # path to a program file
    program_text: Optional[str] = None   # inline program source
    expr: Optional[str] = None
    post: Optional[str] = None
    pre: Optional[str] = None
    inv: Optional[str] = None
    frame: Optional[str] = None
    states: list[str] = []
    mode: str = "wp"
    direction: Optional[str] = None
    domain: DomainOverrides = DomainOverrides()
    config_file: Optional[str] = None
    max_cells: Optional[int] = None
    output: OutputFormat = OutputFormat.TEXT
    seed: Optional[int] = None
    tol: Optional[str] = None
    trials: Optional[int] = None
    laws: Optional[str] = None
    broken_sepcon: bool = False
    casestudy: Optional[str] = None
    size: Optional[int] = None
    p: Optional[str] = None
    literal_heap_rules: bool = False
    export: Optional[str] = None         # oracle: path for the JSON fragment dump


class CommandReport(BaseModel):
    """Stable JSON output schema of every command."""
    command: str
    config: Optional[dict[str, Any]] = None
    results: list[dict[str, Any]] = []
    residual: Optional[str] = None
    witnesses: Optional[list[dict[str, Any]]] = None
    error: Optional[dict[str, Any]] = None
    exit_code: ExitCode = ExitCode.OK

    def render_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)
