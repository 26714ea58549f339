"""Enums for the QSL verification workbench."""

from enum import Enum, IntEnum


class Nondeterminism(str, Enum):
    """How allocator choices are resolved."""
    DEMONIC = "demonic"  # minimize over free blocks
    ANGELIC = "angelic"  # maximize over free blocks


class Termination(str, Enum):
    """Whether divergence counts as success."""
    TOTAL = "total"      # least fixed point, divergence contributes 0
    LIBERAL = "liberal"  # greatest fixed point, divergence contributes 1


class FaultHandling(str, Enum):
    """Whether memory faults count as success."""
    INTRINSIC = "intrinsic"  # faults contribute 0 (separating connectives)
    EXTRINSIC = "extrinsic"  # faults contribute 1 (error connectives)


class OptimizationDirection(str, Enum):
    """Scheduler objective for the expected-reward oracle."""
    MIN = "min"
    MAX = "max"


class InvariantDirection(str, Enum):
    """Which side of the characteristic functional an invariant bounds."""
    UPPER = "upper"  # Phi(I) <= I, bounds the least fixed point from above
    LOWER = "lower"  # I <= Phi(I), bounds the greatest fixed point from below


class FrameDirection(str, Enum):
    """Direction of the frame comparison."""
    SUB = "sub"      # T(X) ** Y <= T(X ** Y), the sound direction
    SUPER = "super"  # T(X) ** Y >= T(X ** Y), the converse


class AllocPolicy(str, Enum):
    """Fixed allocation policies for sampling and restricted schedulers."""
    LOWEST = "lowest"
    HIGHEST = "highest"
    SEEDED_RANDOM = "seeded-random"


class ExhaustionPolicy(str, Enum):
    """What an allocation does when no free block exists."""
    ERROR = "error"  # raise AddressSpaceExhausted
    SINK = "sink"    # contribute 0 and flag the result as a lower bound


class FixpointStatus(str, Enum):
    """Outcome of a fixed-point or value iteration."""
    EXACT = "exact"              # an iteration changed no entry
    APPROXIMATE = "approximate"  # stopped on tolerance


class Verdict(str, Enum):
    """Outcome of a verification check."""
    HOLDS = "holds"
    COUNTEREXAMPLE = "counterexample"
    SIDE_CONDITION_VIOLATED = "side-condition-violated"
    AGREE = "agree"
    DISAGREE = "disagree"


class ArtifactKind(str, Enum):
    """Kinds of randomly generated artifacts."""
    HEAP = "heap"
    EXPECTATION = "expectation"
    PREDICATE = "predicate"
    PROGRAM = "program"


class OutputFormat(str, Enum):
    """CLI output formats."""
    TEXT = "text"
    JSON = "json"


class ExitCode(IntEnum):
    """Process exit codes."""
    OK = 0
    VIOLATION = 1        # a checked property failed, witness attached
    INPUT_ERROR = 2      # parse error, bad flags, bad state literal
    MODEL_ADEQUACY = 3   # value domain exceeded, address space exhausted
    BUDGET_EXHAUSTED = 4  # iteration or fragment budget exhausted
