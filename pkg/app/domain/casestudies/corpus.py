"""Bundled hpGCL programs under ``app/data/programs``."""

from pathlib import Path
from string import Template

from app.domain.syntax import Program, parse_program
from app.models.errors import InputError

PROGRAMS_DIR = Path(__file__).parent.parent.parent / "data" / "programs"

# ─── Source text cache ────────────────────────────────────────────────────────
_source_cache: dict[str, str] = {}


def list_programs() -> list[str]:
    return sorted(p.stem for p in PROGRAMS_DIR.glob("*.hp"))


def program_source(name: str) -> str:
    """Raw text of a bundled program, with ``$name`` placeholders left in place."""
    if name not in _source_cache:
        path = PROGRAMS_DIR / f"{name}.hp"
        if not path.exists():
            raise InputError(f"no bundled program {name!r}", available=list_programs())
        _source_cache[name] = path.read_text(encoding="utf-8")
    return _source_cache[name]


def load_program(name: str, **params: object) -> Program:
    """Parse a bundled program after substituting its ``$name`` placeholders."""
    try:
        text = Template(program_source(name)).substitute({k: str(v) for k, v in params.items()})
    except KeyError as e:
        raise InputError(f"program {name!r} needs parameter {e.args[0]!r}") from e
    return parse_program(text)
