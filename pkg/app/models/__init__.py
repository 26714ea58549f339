"""Models for the QSL verification workbench."""

from .enums import (
    Nondeterminism,
    Termination,
    FaultHandling,
    OptimizationDirection,
    InvariantDirection,
    FrameDirection,
    AllocPolicy,
    ExhaustionPolicy,
    FixpointStatus,
    Verdict,
    ArtifactKind,
    OutputFormat,
    ExitCode,
)

from .errors import (
    WorkbenchError,
    ParseError,
    InputError,
    HeapOverlapError,
    ModelAdequacyError,
    ValueDomainExceeded,
    AddressSpaceExhausted,
    UniformRangeError,
    OperandRangeError,
    BudgetError,
    IterationBudgetExhausted,
    FragmentTooLarge,
    IterateNotMonotone,
)

from .schemas import (
    DomainConfig,
    GenSpec,
    Operand,
    LawViolation,
    LawResult,
    LawReport,
    DomainOverrides,
    CommandRequest,
    CommandReport,
    parse_fraction,
)

__all__ = [
    # Enums
    "Nondeterminism",
    "Termination",
    "FaultHandling",
    "OptimizationDirection",
    "InvariantDirection",
    "FrameDirection",
    "AllocPolicy",
    "ExhaustionPolicy",
    "FixpointStatus",
    "Verdict",
    "ArtifactKind",
    "OutputFormat",
    "ExitCode",
    # Errors
    "WorkbenchError",
    "ParseError",
    "InputError",
    "HeapOverlapError",
    "ModelAdequacyError",
    "ValueDomainExceeded",
    "AddressSpaceExhausted",
    "UniformRangeError",
    "OperandRangeError",
    "BudgetError",
    "IterationBudgetExhausted",
    "FragmentTooLarge",
    "IterateNotMonotone",
    # Schemas
    "DomainConfig",
    "GenSpec",
    "Operand",
    "LawViolation",
    "LawResult",
    "LawReport",
    "DomainOverrides",
    "CommandRequest",
    "CommandReport",
    "parse_fraction",
]
