"""Program states of the bounded model: stacks, heaps and their algebra."""

from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional

from app.models.errors import HeapOverlapError, ValueDomainExceeded
from app.models.schemas import DomainConfig


class Heap(Mapping[int, int]):
    """Immutable finite partial map from addresses to values.

    Heaps are hashable and compare by content; the canonical key is the
    sorted cell tuple.
    """

    __slots__ = ("_cells", "_key", "_hash")

    def __init__(self, cells: Optional[Mapping[int, int] | Iterable[tuple[int, int]]] = None):
        data = dict(cells or {})
        self._cells = data
        self._key = tuple(sorted(data.items()))
        self._hash = hash(self._key)

    def __getitem__(self, addr: int) -> int:
        return self._cells[addr]

    def __contains__(self, addr: object) -> bool:
        return addr in self._cells

    def __iter__(self) -> Iterator[int]:
        return iter(k for k, _ in self._key)

    def __len__(self) -> int:
        return len(self._key)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Heap):
            return self._key == other._key
        return NotImplemented

    def __lt__(self, other: "Heap") -> bool:
        return (len(self._key), self._key) < (len(other._key), other._key)

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{a}↦{v}" for a, v in self._key) + "}"

    @property
    def cells(self) -> tuple[tuple[int, int], ...]:
        return self._key

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self._cells)

    def get(self, addr: int, default: Optional[int] = None) -> Optional[int]:
        return self._cells.get(addr, default)

    def without(self, *addrs: int) -> "Heap":
        return Heap((a, v) for a, v in self._key if a not in addrs)

    def updated(self, addr: int, value: int) -> "Heap":
        data = dict(self._cells)
        data[addr] = value
        return Heap(data)


EMPTY_HEAP = Heap()


class Stack(Mapping[str, int]):
    """Immutable variable valuation."""

    __slots__ = ("_values", "_key", "_hash")

    def __init__(self, values: Optional[Mapping[str, int] | Iterable[tuple[str, int]]] = None):
        data = dict(values or {})
        self._values = data
        self._key = tuple(sorted(data.items()))
        self._hash = hash(self._key)

    def __getitem__(self, name: str) -> int:
        return self._values[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Stack):
            return self._key == other._key
        return NotImplemented

    def __lt__(self, other: "Stack") -> bool:
        return self._key < other._key

    def __repr__(self) -> str:
        return "(" + ", ".join(f"{k}={v}" for k, v in self._key) + ")"

    def as_dict(self) -> Mapping[str, int]:
        """The underlying mapping; callers must not mutate it."""
        return self._values

    def assign(self, name: str, value: int) -> "Stack":
        data = dict(self._values)
        data[name] = value
        return Stack(data)


class ProgState(NamedTuple):
    """A program state (s, h)."""
    stack: Stack
    heap: Heap

    def assign(self, name: str, value: int) -> "ProgState":
        return ProgState(self.stack.assign(name, value), self.heap)

    def with_heap(self, heap: Heap) -> "ProgState":
        return ProgState(self.stack, heap)


# ═══════════════════════════════════════════════════════════════════════════════
# Heap algebra
# ═══════════════════════════════════════════════════════════════════════════════

def disjoint_union(h1: Heap, h2: Heap) -> Heap:
    """h1 ⋆ h2, defined only for disjoint heaps."""
    if not h1:
        return h2
    if not h2:
        return h1
    clash = h1.domain & h2.domain
    if clash:
        raise HeapOverlapError(sorted(clash))
    return Heap({**h1._cells, **h2._cells})


@lru_cache(maxsize=200_000)
def heap_partitions(h: Heap) -> tuple[tuple[Heap, Heap], ...]:
    """All 2^|dom h| ordered splits (h1, h2) with h = h1 ⋆ h2.

    Split i puts cell j into h1 iff bit j of i is set, so the first pair is
    ({}, h) and the last is (h, {}).
    """
    cells = h.cells
    n = len(cells)
    result = []
    for mask in range(1 << n):
        left = [cells[j] for j in range(n) if mask >> j & 1]
        right = [cells[j] for j in range(n) if not mask >> j & 1]
        result.append((Heap(left), Heap(right)))
    return tuple(result)


def heap_includes(h1: Heap, h2: Heap) -> bool:
    """h1 ⊆ h2: some h' has h1 ⋆ h' = h2."""
    return all(a in h2 and h2[a] == v for a, v in h1.cells)


# ═══════════════════════════════════════════════════════════════════════════════
# Store checks
# ═══════════════════════════════════════════════════════════════════════════════

def check_value(cfg: DomainConfig, target: str, value: int) -> int:
    """Reject values outside V before they are stored."""
    if not cfg.vmin <= value <= cfg.vmax:
        raise ValueDomainExceeded(target, value, cfg.vmin, cfg.vmax)
    return value


def store_var(cfg: DomainConfig, state: ProgState, name: str, value: int) -> ProgState:
    return state.assign(name, check_value(cfg, name, value))


def is_address(cfg: DomainConfig, value: int) -> bool:
    return 1 <= value <= cfg.addr_count


def free_blocks(cfg: DomainConfig, heap: Heap, length: int) -> list[int]:
    """Base addresses u with u, ..., u+length-1 all inside 1..A and unallocated."""
    return [
        u for u in range(1, cfg.addr_count - length + 2)
        if all(u + i not in heap for i in range(length))
    ]


def block_heap(base: int, values: Iterable[int]) -> Heap:
    return Heap((base + i, v) for i, v in enumerate(values))
