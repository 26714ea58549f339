"""Recursive heap predicates ls, len, tree and path as least fixed points.

Each predicate is a family of values indexed by (name, argument values,
heap). Evaluating one member collects the members it transitively demands,
all of which live on strictly smaller subheaps, and runs Kleene iteration
from the constant-0 family until no member changes. Solved members go into
a process-wide cache; inserts are idempotent, so concurrent evaluators only
ever race to write the same value.
"""

import logging
from typing import Callable, Optional

from app.domain.state import Heap, ProgState, heap_partitions
from app.models.errors import InputError
from app.models.schemas import DomainConfig

from .values import ExtQ, ZERO, ONE, ext_max

logger = logging.getLogger(__name__)

Key = tuple[str, tuple[int, ...], Heap]
Lookup = Callable[[Key], ExtQ]

_CACHE: dict[Key, ExtQ] = {}
_CACHE_LIMIT = 2_000_000

PREDICATE_NAMES = ("ls", "len", "tree", "path")


def clear_predicate_cache() -> None:
    _CACHE.clear()


def predicate_cache_size() -> int:
    return len(_CACHE)


# ═══════════════════════════════════════════════════════════════════════════════
# One unrolling of each recursive equation
# ═══════════════════════════════════════════════════════════════════════════════

def _ls(args: tuple[int, ...], h: Heap, get: Lookup) -> ExtQ:
    # ls(a, b) = [a = b]·[emp] + [a ≠ b]·sup_c (a ↦ c) ⋆ ls(c, b)
    a, b = args
    if a == b:
        return ONE if not h else ZERO
    if a not in h:
        return ZERO
    return get(("ls", (h[a], b), h.without(a)))


def _len(args: tuple[int, ...], h: Heap, get: Lookup) -> ExtQ:
    # len(a, b) = [a ≠ b]·sup_c (a ↦ c) ⋆ (ls(c, b) + len(c, b))
    a, b = args
    if a == b or a not in h:
        return ZERO
    rest = h.without(a)
    c = h[a]
    return get(("ls", (c, b), rest)) + get(("len", (c, b), rest))


def _tree(args: tuple[int, ...], h: Heap, get: Lookup) -> ExtQ:
    # tree(a) = [a = 0]·[emp] + sup_{b,c} (a ↦ b, c) ⋆ tree(b) ⋆ tree(c)
    (a,) = args
    base = ONE if a == 0 and not h else ZERO
    if a not in h or a + 1 not in h:
        return base
    left, right = h[a], h[a + 1]
    rest = h.without(a, a + 1)
    split = ext_max(
        get(("tree", (left,), h1)) * get(("tree", (right,), h2))
        for h1, h2 in heap_partitions(rest)
    )
    return base + split


def _path(k: int) -> Callable[[tuple[int, ...], Heap, Lookup], ExtQ]:
    # path_k(a) = sup_b (max_{i<k} a+i ↦ b) ⋆ (1 + path_k(b))
    name = f"path{k}"

    def unfold(args: tuple[int, ...], h: Heap, get: Lookup) -> ExtQ:
        (a,) = args
        return ext_max(
            ONE + get((name, (h[a + i],), h.without(a + i)))
            for i in range(k)
            if a + i in h
        )
    return unfold


_UNFOLD: dict[str, Callable[[tuple[int, ...], Heap, Lookup], ExtQ]] = {
    "ls": _ls,
    "len": _len,
    "tree": _tree,
}


def _unfolding(name: str) -> Callable[[tuple[int, ...], Heap, Lookup], ExtQ]:
    fn = _UNFOLD.get(name)
    if fn is None and name.startswith("path"):
        fn = _UNFOLD[name] = _path(int(name[4:]))
    if fn is None:
        raise InputError(f"unknown recursive predicate {name!r}")
    return fn


# ═══════════════════════════════════════════════════════════════════════════════
# Kleene iteration over the demanded family
# ═══════════════════════════════════════════════════════════════════════════════

def _demanded(root: Key) -> list[Key]:
    """Unsolved members reachable from ``root``, discovered with a recording lookup."""
    family: dict[Key, None] = {}
    todo = [root]
    while todo:
        key = todo.pop()
        if key in family or key in _CACHE:
            continue
        family[key] = None
        deps: list[Key] = []

        def record(dep: Key) -> ExtQ:
            deps.append(dep)
            return ZERO

        name, args, h = key
        _unfolding(name)(args, h, record)
        todo.extend(deps)
    return list(family)


def solve(root: Key) -> ExtQ:
    cached = _CACHE.get(root)
    if cached is not None:
        return cached
    family = _demanded(root)
    current = {key: ZERO for key in family}

    def get(key: Key) -> ExtQ:
        solved = _CACHE.get(key)
        return solved if solved is not None else current[key]

    rounds = 0
    while True:
        rounds += 1
        nxt = {key: _unfolding(key[0])(key[1], key[2], get) for key in family}
        changed = nxt != current
        current = nxt
        if not changed:
            break

    if len(_CACHE) > _CACHE_LIMIT:
        logger.debug("predicate cache exceeded %d entries, clearing", _CACHE_LIMIT)
        _CACHE.clear()
    _CACHE.update(current)
    logger.debug("solved %s over %d members in %d rounds", root[0], len(family), rounds)
    return current[root]


def eval_fixpoint_predicate(name: str, args: tuple[int, ...], state: ProgState,
                            cfg: Optional[DomainConfig] = None) -> ExtQ:
    """Least-fixed-point value of ls, len, tree or path_k at the given argument values.

    ``name`` is ``ls``, ``len``, ``tree`` or ``path`` with ``path`` taking the
    record size as its first argument. Predicate values depend on the heap
    only, so ``cfg`` is accepted for interface symmetry and not consulted.
    """
    if name == "path":
        k, *rest = args
        if k < 1:
            raise InputError(f"path record size must be at least 1, got {k}")
        return solve((f"path{k}", tuple(rest), state.heap))
    if name not in _UNFOLD:
        raise InputError(f"unknown recursive predicate {name!r}")
    arity = 2 if name in ("ls", "len") else 1
    if len(args) != arity:
        raise InputError(f"{name} takes {arity} arguments, got {len(args)}")
    return solve((name, tuple(args), state.heap))
