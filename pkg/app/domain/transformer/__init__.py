"""Weakest-preexpectation transformers over the bounded model."""

from .modes import TransformerMode, MODES, WEP, WP, WLP, mode_by_name
from .fixpoint import Approximation, LoopSolver
from .engine import (
    SemExpectation, Transformer, check_vars, needs_one_bounded, one_bounded_post, post_function, transform,
    wp_function,
)
from .loops import CheckResult, check_invariant, loop_fixpoint
from .theorems import (
    DUALITY_PAIRS,
    DualityEntry,
    ConservativityResult,
    check_conservativity,
    check_duality,
    check_frame,
)

__all__ = [
    "TransformerMode", "MODES", "WP", "WLP", "WEP", "mode_by_name",
    "Approximation", "LoopSolver",
    "SemExpectation", "Transformer", "check_vars", "needs_one_bounded", "one_bounded_post", "post_function",
    "transform", "wp_function",
    "CheckResult", "check_invariant", "loop_fixpoint",
    "DUALITY_PAIRS", "DualityEntry", "ConservativityResult",
    "check_conservativity", "check_duality", "check_frame",
]
