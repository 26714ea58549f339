"""State literal syntax: ``x=1,y=0; heap=1:7,2:0``."""

import re
from typing import Optional

from app.models.errors import InputError
from app.models.schemas import DomainConfig

from .model import Heap, ProgState, Stack, check_value

_BINDING = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(-?\d+)\s*$")
_CELL = re.compile(r"^\s*(\d+)\s*:\s*(-?\d+)\s*$")


def parse_state_literal(text: str, cfg: Optional[DomainConfig] = None) -> ProgState:
    """Parse a state literal.

    Variables not mentioned default to 0 when ``cfg`` is given; values and
    addresses are checked against the model.
    """
    parts = text.split(";")
    heap_part = next((p for p in parts if p.strip().startswith("heap")), "")
    stack_part = ",".join(p for p in parts if not p.strip().startswith("heap"))

    values: dict[str, int] = {}
    for binding in filter(str.strip, stack_part.split(",")):
        m = _BINDING.match(binding)
        if not m:
            raise InputError(f"bad variable binding {binding.strip()!r} in state literal")
        values[m.group(1)] = int(m.group(2))

    cells: dict[int, int] = {}
    if heap_part:
        _, _, body = heap_part.partition("=")
        for cell in filter(str.strip, body.split(",")):
            m = _CELL.match(cell)
            if not m:
                raise InputError(f"bad heap cell {cell.strip()!r} in state literal")
            addr, value = int(m.group(1)), int(m.group(2))
            if addr in cells:
                raise InputError(f"address {addr} bound twice in state literal")
            cells[addr] = value

    if cfg is not None:
        unknown = set(values) - set(cfg.vars)
        if unknown:
            raise InputError(f"state literal binds unknown variables {sorted(unknown)}")
        values = {name: values.get(name, 0) for name in cfg.vars}
        for name, value in values.items():
            check_value(cfg, name, value)
        for addr, value in cells.items():
            if not 1 <= addr <= cfg.addr_count:
                raise InputError(f"address {addr} outside 1..{cfg.addr_count}")
            check_value(cfg, f"<{addr}>", value)
    return ProgState(Stack(values), Heap(cells))


def render_heap(h: Heap) -> str:
    return ",".join(f"{a}:{v}" for a, v in h.cells)


def render_state(state: ProgState) -> str:
    stack = ",".join(f"{k}={state.stack[k]}" for k in state.stack)
    return f"{stack}; heap={render_heap(state.heap)}"
