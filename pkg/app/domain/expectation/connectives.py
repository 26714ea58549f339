"""Quantitative separating connectives over the bounded heap model.

All functions here work on compiled state functions ``fn(env, heap) -> ExtQ``
so that the evaluator can share them between fast and generic paths.
"""

import logging
from contextlib import contextmanager
from typing import Callable, Iterable, Iterator, Mapping, Optional

from app.domain.state import Heap, disjoint_union, heap_partitions
from app.models.errors import OperandRangeError

from .values import ExtQ, ONE, ZERO, INF, ext_max, ext_min

logger = logging.getLogger(__name__)

Env = Mapping[str, int]
StateFn = Callable[[Env, Heap], ExtQ]
FootprintFn = Callable[[Env, Heap], Optional[Heap]]
CandidatesFn = Callable[[Env, Heap], Iterable[Heap]]

_broken_sepcon = False


@contextmanager
def broken_sepcon() -> Iterator[None]:
    """Debug hook: evaluate ⋆ with min over partitions instead of max.

    Expectations compiled inside the block see the broken connective; the law
    bench uses this to check that its laws actually detect a faulty ⋆.
    """
    global _broken_sepcon
    previous = _broken_sepcon
    _broken_sepcon = True
    logger.warning("broken_sepcon hook active: ⋆ evaluates with min")
    try:
        yield
    finally:
        _broken_sepcon = previous


def sepcon_hook_active() -> bool:
    return _broken_sepcon


# ═══════════════════════════════════════════════════════════════════════════════
# ⋆ and −⋆
# ═══════════════════════════════════════════════════════════════════════════════

def sep_con(left: StateFn, right: StateFn, env: Env, h: Heap, broken: bool = False) -> ExtQ:
    """max over h = h1 ⋆ h2 of left(h1)·right(h2)."""
    products = (left(env, h1) * right(env, h2) for h1, h2 in heap_partitions(h))
    if broken:
        return ext_min(products)
    return ext_max(products)


def sep_con_footprint(footprint: FootprintFn, right: StateFn, env: Env, h: Heap) -> ExtQ:
    """⋆ whose left operand is 1 on exactly one subheap of h and 0 elsewhere."""
    h1 = footprint(env, h)
    if h1 is None:
        return ZERO
    return right(env, h.without(*h1.domain))


def sep_imp(left: StateFn, right: StateFn, candidates: CandidatesFn, env: Env, h: Heap) -> ExtQ:
    """inf over disjoint extensions h' with left(h') = 1 of right(h ⋆ h'); inf ∅ = ∞."""
    return ext_min(
        (right(env, disjoint_union(h, ext)) for ext in candidates(env, h) if left(env, ext) == ONE),
        empty=INF,
    )


# ═══════════════════════════════════════════════════════════════════════════════
# ● and −● (extrinsic memory safety, defined on one-bounded operands)
# ═══════════════════════════════════════════════════════════════════════════════

def _bounded(value: ExtQ, connective: str, side: str) -> ExtQ:
    if ONE < value:
        raise OperandRangeError(
            f"{side} operand of {connective} evaluated to {value}, outside [0, 1]",
            connective=connective, value=str(value),
        )
    return value


def err_sep_con(left: StateFn, right: StateFn, env: Env, h: Heap) -> ExtQ:
    """min over h = h1 ⋆ h2 of 1 − X(h1) + X(h1)·Y(h2)."""
    best = ONE
    for h1, h2 in heap_partitions(h):
        x = _bounded(left(env, h1), "@*", "left")
        if x.is_zero():
            continue  # contributes 1
        y = _bounded(right(env, h2), "@*", "right")
        value = x.one_minus() + x * y
        if value < best:
            best = value
            if best.is_zero():
                break
    return best


def err_sep_imp(left: StateFn, right: StateFn, candidates: CandidatesFn, env: Env, h: Heap) -> ExtQ:
    """sup over disjoint extensions h' with left(h') = 1 of right(h ⋆ h'); sup ∅ = 0."""
    return ext_max(
        (
            _bounded(right(env, disjoint_union(h, ext)), "-@", "right")
            for ext in candidates(env, h)
            if left(env, ext) == ONE
        ),
        empty=ZERO,
    )
