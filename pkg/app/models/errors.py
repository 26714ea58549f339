"""Exception hierarchy for the QSL verification workbench.

Every error carries the exit code the CLI reports for it and a ``detail``
dict that is rendered into the JSON report. Verification failures are not
errors; they travel as verdicts with witnesses.
"""

from typing import Any, Optional

from .enums import ExitCode


class WorkbenchError(Exception):
    """Base class for all workbench diagnostics."""

    code: ExitCode = ExitCode.INPUT_ERROR
    kind: str = "error"

    def __init__(self, message: str, **detail: Any):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "message": self.message,
            "exit_code": int(self.code),
            **{k: _jsonable(v) for k, v in self.detail.items()},
        }


# ═══════════════════════════════════════════════════════════════════════════════
# Input errors (exit 2)
# ═══════════════════════════════════════════════════════════════════════════════

class ParseError(WorkbenchError):
    """Concrete-syntax error with position and expected tokens."""
    kind = "parse-error"

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 expected: Optional[list[str]] = None):
        super().__init__(message, line=line, column=column, expected=sorted(expected or []))
        self.line = line
        self.column = column
        self.expected = sorted(expected or [])


class InputError(WorkbenchError):
    """Bad flags, state literals, configuration or ill-formed artifacts."""
    kind = "input-error"


class HeapOverlapError(WorkbenchError):
    """Disjoint union of heaps that share addresses."""
    kind = "heap-overlap"

    def __init__(self, addresses: list[int]):
        super().__init__(f"heaps overlap on addresses {sorted(addresses)}", addresses=sorted(addresses))
        self.addresses = sorted(addresses)


# ═══════════════════════════════════════════════════════════════════════════════
# Model-adequacy errors (exit 3)
# ═══════════════════════════════════════════════════════════════════════════════

class ModelAdequacyError(WorkbenchError):
    """The bounded model is too small for the requested computation."""
    code = ExitCode.MODEL_ADEQUACY
    kind = "model-adequacy"


class ValueDomainExceeded(ModelAdequacyError):
    """A value outside V was about to be stored."""
    kind = "value-domain-exceeded"

    def __init__(self, target: str, value: int, vmin: int, vmax: int):
        super().__init__(
            f"value {value} stored into {target} lies outside V = [{vmin}, {vmax}]",
            target=target, value=value, vmin=vmin, vmax=vmax,
        )
        self.value = value


class AddressSpaceExhausted(ModelAdequacyError):
    """An allocation found no free block within addresses 1..A."""
    kind = "address-space-exhausted"

    def __init__(self, length: int, addr_count: int, heap: str):
        super().__init__(
            f"no free block of length {length} within addresses 1..{addr_count} (heap {heap})",
            length=length, addr_count=addr_count, heap=heap,
        )


class UniformRangeError(ModelAdequacyError):
    """uniform(x, e, e') evaluated with s(e) > s(e')."""
    kind = "uniform-range"

    def __init__(self, low: int, high: int):
        super().__init__(f"uniform range is empty: {low} > {high}", low=low, high=high)


class OperandRangeError(ModelAdequacyError):
    """An operand left the range a connective is defined on."""
    kind = "operand-range"


# ═══════════════════════════════════════════════════════════════════════════════
# Budget errors (exit 4)
# ═══════════════════════════════════════════════════════════════════════════════

class BudgetError(WorkbenchError):
    code = ExitCode.BUDGET_EXHAUSTED
    kind = "budget"


class IterationBudgetExhausted(BudgetError):
    """A fixed-point or value iteration hit its iteration cap."""
    kind = "iteration-budget-exhausted"

    def __init__(self, what: str, iterations: int, residual: Any, last_iterate: Optional[dict] = None):
        super().__init__(
            f"{what} did not converge within {iterations} iterations (residual {residual})",
            what=what, iterations=iterations, residual=residual,
        )
        self.iterations = iterations
        self.residual = residual
        self.last_iterate = last_iterate or {}


class FragmentTooLarge(BudgetError):
    """The reachable MDP fragment exceeded its configuration cap."""
    kind = "fragment-too-large"

    def __init__(self, cap: int, frontier: int):
        super().__init__(
            f"reachable fragment exceeds {cap} configurations (frontier {frontier})",
            cap=cap, frontier=frontier,
        )


class IterateNotMonotone(WorkbenchError):
    """Consecutive fixed-point iterates were not ordered; indicates an engine bug."""
    code = ExitCode.VIOLATION
    kind = "iterate-not-monotone"


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return str(value)
