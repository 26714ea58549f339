"""Operational semantics: the execution relation, MDP fragments and the expected-reward oracle."""

from .semantics import Control, Configuration, Transition, step
from .mdp import MDPFragment, OracleResult, build_fragment, expected_reward, export_fragment
from .checks import (
    SoundnessReport,
    soundness_check,
    TripleResult,
    check_triple,
    SampleResult,
    sample_run,
)

__all__ = [
    "Control", "Configuration", "Transition", "step",
    "MDPFragment", "OracleResult", "build_fragment", "expected_reward", "export_fragment",
    "SoundnessReport", "soundness_check", "TripleResult", "check_triple", "SampleResult", "sample_run",
]
