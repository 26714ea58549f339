"""Executable law catalog: random operands, exhaustive bounded checks, replayable witnesses."""

from .base import Law, LawContext, Witness
from .bench import (
    BROKEN_SEPCON_HOOK,
    LAWS,
    decode_operand,
    encode_operand,
    replay_witness,
    run_law,
    run_law_suite,
    select_laws,
)
from .generators import ArtifactGenerator, generate

__all__ = [
    "Law", "LawContext", "Witness",
    "BROKEN_SEPCON_HOOK", "LAWS", "decode_operand", "encode_operand",
    "replay_witness", "run_law", "run_law_suite", "select_laws",
    "ArtifactGenerator", "generate",
]
