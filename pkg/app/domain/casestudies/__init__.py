"""Case studies: bundled programs and their bounded reproductions."""

from .corpus import PROGRAMS_DIR, list_programs, load_program, program_source
from .studies import (
    CASE_STUDIES,
    LIST_INVARIANT,
    LOSSY_INVARIANT,
    CaseStudyResult,
    continuity,
    faulty_gc,
    frame_converse,
    list_extension,
    lossy_reversal,
    randomize,
    run_case_study,
)

__all__ = [
    "PROGRAMS_DIR", "list_programs", "load_program", "program_source",
    "CASE_STUDIES", "LIST_INVARIANT", "LOSSY_INVARIANT", "CaseStudyResult",
    "continuity", "faulty_gc", "frame_converse", "list_extension", "lossy_reversal", "randomize",
    "run_case_study",
]
