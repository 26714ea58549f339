"""Exhaustive enumeration of the bounded state space."""

from functools import lru_cache
from itertools import combinations, product
from math import comb

from app.models.errors import InputError
from app.models.schemas import DomainConfig

from .model import Heap, ProgState, Stack


def _heaps_over(addresses: tuple[int, ...], values: range, max_cells: int) -> tuple[Heap, ...]:
    result = []
    for k in range(max_cells + 1):
        for addrs in combinations(addresses, k):
            for vals in product(values, repeat=k):
                result.append(Heap(zip(addrs, vals)))
    return tuple(result)


@lru_cache(maxsize=64)
def enumerate_heaps(cfg: DomainConfig, max_cells: int) -> tuple[Heap, ...]:
    """All heaps with at most ``max_cells`` cells over 1..A and V.

    Ordered by size, then by address combination, then by values.
    """
    if not 0 <= max_cells <= cfg.addr_count:
        raise InputError(f"max_cells must lie in [0, {cfg.addr_count}], got {max_cells}")
    return _heaps_over(tuple(cfg.addresses), cfg.values, max_cells)


@lru_cache(maxsize=64)
def enumerate_stacks(cfg: DomainConfig) -> tuple[Stack, ...]:
    return tuple(Stack(zip(cfg.vars, vals)) for vals in product(cfg.values, repeat=len(cfg.vars)))


@lru_cache(maxsize=16)
def enumerate_states(cfg: DomainConfig, max_cells: int) -> tuple[ProgState, ...]:
    """Cartesian product of all stacks with enumerate_heaps(cfg, max_cells)."""
    heaps = enumerate_heaps(cfg, max_cells)
    return tuple(ProgState(s, h) for s in enumerate_stacks(cfg) for h in heaps)


@lru_cache(maxsize=4096)
def _extensions(cfg: DomainConfig, domain: frozenset[int]) -> tuple[Heap, ...]:
    free = tuple(a for a in cfg.addresses if a not in domain)
    return _heaps_over(free, cfg.values, len(free))


def heap_extensions(cfg: DomainConfig, h: Heap) -> tuple[Heap, ...]:
    """Every heap h' disjoint from h over addresses 1..A and values V, any size."""
    return _extensions(cfg, h.domain)


def heap_count(cfg: DomainConfig, max_cells: int) -> int:
    """Closed form: sum over k of C(A, k)·|V|^k."""
    n = len(cfg.values)
    return sum(comb(cfg.addr_count, k) * n ** k for k in range(max_cells + 1))
