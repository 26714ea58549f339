"""Bounded reproductions of the worked verification scenarios.

Each study fixes a small model, runs the bundled program through the
expected-reward oracle and the transformer, and compares the numbers with
the claimed bound. ``CaseStudyResult.holds`` says whether the claim was
reproduced.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Any, Callable, Optional

from app.domain.expectation import (
    EMP, ExtQ, PointsTo, eval_expectation, parse_expectation, render_expectation, substitute,
)
from app.domain.operational import expected_reward
from app.domain.state import Heap, ProgState, Stack, enumerate_heaps, render_state
from app.domain.syntax import Const, Program, Var, While, parse_program, subprograms
from app.domain.transformer import WLP, WP, check_frame, check_invariant, wp_function
from app.models.enums import (
    AllocPolicy, ExhaustionPolicy, FrameDirection, InvariantDirection, OptimizationDirection, Verdict,
)
from app.models.errors import InputError
from app.models.schemas import DomainConfig, parse_fraction

from .corpus import load_program

logger = logging.getLogger(__name__)

LOSSY_INVARIANT = "len(r, 0) ** ls(hd, 0) + 1/2 * [hd != 0] * (len(hd, 0) ** ls(r, 0))"
LIST_INVARIANT = "len(x, 0) + [c = 1]"


@dataclass
class CaseStudyResult:
    """Claimed bound against computed numbers, one row per checked instance."""
    name: str
    claim: str
    holds: bool
    config: DomainConfig
    rows: list[dict[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict[str, Any]:
        return {
            "casestudy": self.name,
            "claim": self.claim,
            "holds": self.holds,
            "rows": self.rows,
            "notes": self.notes,
        }


def _state(cfg: DomainConfig, cells: dict[int, int], **values: int) -> ProgState:
    return ProgState(Stack({v: values.get(v, 0) for v in cfg.vars}), Heap(cells))


def _loop_of(c: Program) -> While:
    return next(p for p in subprograms(c) if isinstance(p, While))


# ═══════════════════════════════════════════════════════════════════════════════
# Array randomization
# ═══════════════════════════════════════════════════════════════════════════════

def randomize(n: int = 3) -> CaseStudyResult:
    """Every permutation of an n-cell array is produced with probability 1/n!."""
    if not 1 <= n <= 4:
        raise InputError(f"randomize is reproduced for 1 <= n <= 4, got {n}")
    cfg = DomainConfig(vars=("array", "n", "i", "j", "t", "u"), vmin=0, vmax=n, addr_count=n)
    c = load_program("randomize")
    init = _state(cfg, {k: k for k in range(1, n + 1)}, array=1, n=n)
    bound = ExtQ(Fraction(1, factorial(n)))

    rows = []
    total = ExtQ(0)
    for perm in permutations(range(1, n + 1)):
        post = PointsTo(Var("array"), tuple(Const(v) for v in perm))
        oracle = expected_reward(OptimizationDirection.MIN, c, post, [init], cfg).values[init]
        wp_fn, _ = wp_function(WP, c, post, cfg)
        wp_value = wp_fn(init)
        total = total + oracle
        rows.append({
            "permutation": ",".join(map(str, perm)),
            "oracle": str(oracle),
            "wp": str(wp_value),
            "bound": str(bound),
        })
    holds = all(r["oracle"] == r["wp"] == str(bound) for r in rows) and total == 1
    logger.info("randomize(n=%d): %d permutations, total probability %s", n, len(rows), total)
    return CaseStudyResult(
        name="randomize",
        claim=f"each permutation of {n} cells has probability at most 1/{n}!",
        holds=holds,
        config=cfg,
        rows=rows,
        notes=[f"initial state {render_state(init)}", f"total probability {total}"],
    )


# ═══════════════════════════════════════════════════════════════════════════════
# Lossy list reversal
# ═══════════════════════════════════════════════════════════════════════════════

def lossy_reversal(length: int = 2, *, invariant_cells: Optional[int] = None) -> CaseStudyResult:
    """The expected length of the reversed list is half the input length.

    The loop invariant is checked over every state with at most
    ``invariant_cells`` cells (all of 1..L by default).
    """
    if length < 1:
        raise InputError(f"lossy reversal needs a list of length at least 1, got {length}")
    cfg = DomainConfig(vars=("hd", "r", "t"), vmin=0, vmax=length, addr_count=length)
    c = load_program("lossy_reversal")
    loop = _loop_of(c)
    post = parse_expectation("len(r, 0)")
    inv = parse_expectation(LOSSY_INVARIANT)
    cells = {k: (k + 1 if k < length else 0) for k in range(1, length + 1)}
    init = _state(cfg, cells, hd=1)

    oracle = expected_reward(OptimizationDirection.MIN, c, post, [init], cfg).values[init]
    wp_fn, _ = wp_function(WP, c, post, cfg)
    wp_value = wp_fn(init)
    bound = eval_expectation(substitute(inv, "r", Const(0)), init, cfg)
    expected = ExtQ(Fraction(length, 2))
    check = check_invariant(
        InvariantDirection.UPPER, loop.guard, loop.body, post, inv, cfg,
        cfg.addr_count if invariant_cells is None else invariant_cells,
    )

    holds = oracle == expected and wp_value == expected and not bound < oracle and check.holds
    notes = [f"invariant {LOSSY_INVARIANT}: {check.verdict.value}"]
    if check.state is not None:
        notes.append(f"invariant fails at {render_state(check.state)}: {check.lhs} > {check.rhs}")
    return CaseStudyResult(
        name="lossy-reversal",
        claim="expected reversed length is at most half the input length",
        holds=holds,
        config=cfg,
        rows=[{
            "length": length,
            "expected": str(expected),
            "oracle": str(oracle),
            "wp": str(wp_value),
            "invariant_bound": str(bound),
        }],
        notes=notes,
    )


# ═══════════════════════════════════════════════════════════════════════════════
# Randomized list extension
# ═══════════════════════════════════════════════════════════════════════════════

def list_extension(addrs: int = 30, *, invariant_addrs: int = 3) -> CaseStudyResult:
    """The expected number of prepended cells is at most one.

    The oracle runs under the lowest-address scheduler with the sink policy,
    so its value is the truncated series 1 − (A+2)/2^(A+1). The invariant is
    checked on a separate model with ``invariant_addrs`` addresses and at
    most A − 1 cells, so that every allocation finds a free block.
    """
    if addrs < 1 or invariant_addrs < 2:
        raise InputError(f"list extension needs addrs >= 1 and invariant_addrs >= 2, got {addrs}, {invariant_addrs}")
    c = load_program("list_extension")
    post = parse_expectation("len(x, 0)")
    cfg = DomainConfig(vars=("c", "x"), vmin=0, vmax=addrs, addr_count=addrs)
    init = _state(cfg, {}, c=0, x=0)

    # the fragment is acyclic, so iteration with tolerance 0 ends on the exact value
    result = expected_reward(
        OptimizationDirection.MIN, c, post, [init], cfg, Fraction(0),
        alloc_policy=AllocPolicy.LOWEST, exhaustion=ExhaustionPolicy.SINK,
    )
    value = result.values[init]
    truncated = ExtQ(1 - Fraction(addrs + 2, 2 ** (addrs + 1)))
    gap = ExtQ(1).distance(value)

    small = DomainConfig(vars=("c", "x"), vmin=0, vmax=invariant_addrs, addr_count=invariant_addrs)
    loop = _loop_of(c)
    inv = parse_expectation(LIST_INVARIANT)
    check = check_invariant(
        InvariantDirection.UPPER, loop.guard, loop.body, post, inv, small, invariant_addrs - 1,
    )

    holds = value == truncated and not ExtQ(Fraction(1, 1_000_000)) < gap and check.holds
    notes = [
        f"{len(result.fragment)} configurations, {len(result.fragment.sinks)} exhausted allocations",
        f"invariant {LIST_INVARIANT} on {invariant_addrs} addresses: {check.verdict.value}",
    ]
    return CaseStudyResult(
        name="list-extension",
        claim="wp(c_list)(len(x,0)) <= len(x,0) + 1",
        holds=holds,
        config=cfg,
        rows=[{
            "addrs": addrs,
            "oracle": str(value),
            "truncated_series": str(truncated),
            "bound": "1",
            "gap": float(gap),
            "lower_bound": result.lower_bound,
        }],
        notes=notes,
    )


# ═══════════════════════════════════════════════════════════════════════════════
# Faulty garbage collector
# ═══════════════════════════════════════════════════════════════════════════════

def faulty_gc(p: Any = Fraction(1, 2)) -> CaseStudyResult:
    """Deleting a tree succeeds with probability at least [tree(x)]·(1−p)^size.

    Every tree fitting into four addresses has at most two nodes, which the
    two inlined levels of the bundled delete cover. The exact success
    probability is (1−p)^(size/2), one coin per node.
    """
    p = parse_fraction(p)
    if not 0 <= p <= 1:
        raise InputError(f"probability must lie in [0, 1], got {p}")
    q = 1 - p
    cfg = DomainConfig(vars=("x", "l", "r", "y"), vmin=0, vmax=4, addr_count=4)
    c = load_program("gc_delete", p=p)
    tree = parse_expectation("tree(x)")
    bound_e = parse_expectation(f"tree(x) * pow({q}, size)")

    inits = [
        _state(cfg, dict(h.cells), x=x)
        for h in enumerate_heaps(cfg, cfg.addr_count)
        for x in cfg.values
        if eval_expectation(tree, _state(cfg, dict(h.cells), x=x), cfg) == 1
    ]
    oracle = expected_reward(OptimizationDirection.MIN, c, EMP, inits, cfg)
    wlp_fn, _ = wp_function(WLP, c, EMP, cfg)

    rows = []
    holds = True
    for state in inits:
        success = oracle.values[state]
        wlp_value = wlp_fn(state)
        bound = eval_expectation(bound_e, state, cfg)
        exact = ExtQ(q ** (len(state.heap) // 2))
        holds = holds and not success < bound and success == wlp_value == exact
        rows.append({
            "state": render_state(state),
            "size": len(state.heap),
            "success": str(success),
            "wlp": str(wlp_value),
            "bound": str(bound),
        })
    logger.info("faulty gc (p=%s): %d tree states", p, len(rows))
    return CaseStudyResult(
        name="gc",
        claim=f"wlp(delete)([emp]) >= {render_expectation(bound_e)}",
        holds=holds,
        config=cfg,
        rows=rows,
        notes=["success equals (1-p)^(size/2) on every tree state"] if holds else [],
    )


# ═══════════════════════════════════════════════════════════════════════════════
# Negative results
# ═══════════════════════════════════════════════════════════════════════════════

def continuity(addrs: int = 4) -> CaseStudyResult:
    """wp is not continuous once allocation is involved.

    On the chain [1 ≤ x ≤ n] the demonic allocator escapes every strict
    subrange, so every wp is 0 while wp of the chain's top is 1.
    """
    cfg = DomainConfig(vars=("x",), vmin=0, vmax=addrs, addr_count=addrs)
    c = parse_program("x := new(0)")
    init = _state(cfg, {})
    rows = []
    for n in range(1, addrs + 1):
        fn, _ = wp_function(WP, c, parse_expectation(f"[1 <= x && x <= {n}]"), cfg)
        rows.append({"n": n, "wp": str(fn(init))})
    expected = ["0"] * (addrs - 1) + ["1"]
    return CaseStudyResult(
        name="continuity",
        claim="max_n wp(x := new(0))([1<=x<=n]) differs from wp of the chain's supremum",
        holds=[r["wp"] for r in rows] == expected,
        config=cfg,
        rows=rows,
    )


def frame_converse() -> CaseStudyResult:
    """The frame rule holds, its converse fails for <x> := 0, [emp] and x ~> 0."""
    cfg = DomainConfig(vars=("x",), vmin=0, vmax=2, addr_count=2)
    c = parse_program("<x> := 0")
    x = parse_expectation("[emp]")
    y = parse_expectation("x ~> 0")
    sub = check_frame(c, x, y, cfg, cfg.addr_count, direction=FrameDirection.SUB)
    sup = check_frame(c, x, y, cfg, cfg.addr_count, direction=FrameDirection.SUPER)
    rows = []
    for direction, result in (("sub", sub), ("super", sup)):
        row: dict[str, Any] = {"direction": direction, "verdict": result.verdict.value}
        if result.state is not None:
            row.update(state=render_state(result.state), lhs=str(result.lhs), rhs=str(result.rhs))
        rows.append(row)
    return CaseStudyResult(
        name="frame-converse",
        claim="wp(c)(X) ** Y <= wp(c)(X ** Y) holds, the converse does not",
        holds=sub.verdict is Verdict.HOLDS and sup.verdict is Verdict.COUNTEREXAMPLE,
        config=cfg,
        rows=rows,
    )


CASE_STUDIES: dict[str, Callable[..., CaseStudyResult]] = {
    "randomize": randomize,
    "lossy-reversal": lossy_reversal,
    "list-extension": list_extension,
    "gc": faulty_gc,
    "continuity": continuity,
    "frame-converse": frame_converse,
}


def run_case_study(name: str, size: Optional[int] = None, p: Optional[str] = None) -> CaseStudyResult:
    """Run a case study by name; ``size`` is n, L or A depending on the study."""
    study = CASE_STUDIES.get(name)
    if study is None:
        raise InputError(f"unknown case study {name!r}", available=sorted(CASE_STUDIES))
    kwargs: dict[str, Any] = {}
    if size is not None:
        if name in ("gc", "frame-converse"):
            raise InputError(f"case study {name!r} has a fixed size")
        key = {"randomize": "n", "lossy-reversal": "length", "list-extension": "addrs", "continuity": "addrs"}[name]
        kwargs[key] = size
    if p is not None:
        if name != "gc":
            raise InputError(f"case study {name!r} takes no probability")
        kwargs["p"] = p
    logger.info("running case study %s %s", name, kwargs)
    result = study(**kwargs)
    logger.info("case study %s: %s", name, "reproduced" if result.holds else "NOT reproduced")
    return result
