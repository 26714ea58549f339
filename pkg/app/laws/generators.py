"""Seeded random generation of heaps, expectations, SL formulas and programs.

Generation draws from a numpy ``Generator``. A trial's generator is seeded
with (suite seed, law id, trial index), so every artifact can be recreated
from those three values alone.
"""

import zlib
from fractions import Fraction
from typing import Any, Optional, Sequence, TypeVar

import numpy as np

from app.domain.expectation import (
    Expectation, SLFormula,
    EConst, Iverson, Emp, PointsTo, ValidPointer, Contains, ContainsAny, ListSegment, ListLength,
    Add, Mul, Monus, Max, Min, Sup, OneMinus, SepCon, SepImp,
    SLPure, SLEmp, SLPointsTo, SLAnd, SLNot, SLExists, SLStar, SLWand,
    EMP, INF_E, SIZE, const, is_predicate,
)
from app.domain.state import Heap
from app.domain.syntax import (
    ArithExpr, GuardExpr, Program,
    Const, Var, BinOp, Compare, And, Or, Not,
    SKIP, Assign, Ite, While, PChoice, Alloc, Mutate, Lookup, Free, Uniform, seq,
)
from app.models.enums import ArtifactKind
from app.models.schemas import GenSpec

T = TypeVar("T")

_CONSTANTS = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(3))
_PROBABILITIES = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))


class ArtifactGenerator:
    """Random artifacts within the budgets of a GenSpec."""

    def __init__(self, spec: GenSpec, rng: Optional[np.random.Generator] = None):
        self.spec = spec
        self.cfg = spec.domain
        self.rng = rng if rng is not None else np.random.default_rng(spec.seed)
        self.vars: tuple[str, ...] = tuple(self.cfg.vars)
        self.bound_var = "v" if "v" not in self.vars else "v_q"

    @classmethod
    def for_trial(cls, spec: GenSpec, law_id: str, trial: int) -> "ArtifactGenerator":
        rng = np.random.default_rng([spec.seed, zlib.crc32(law_id.encode()), trial])
        return cls(spec, rng)

    # ── primitive draws ──────────────────────────────────────────────────────

    def pick(self, items: Sequence[T]) -> T:
        return items[int(self.rng.integers(len(items)))]

    def chance(self, p: float) -> bool:
        return bool(self.rng.random() < p)

    def value(self) -> int:
        return int(self.rng.integers(self.cfg.vmin, self.cfg.vmax + 1))

    def rational(self) -> Fraction:
        """A rational in [0, 1]."""
        return self.pick((Fraction(0),) + _PROBABILITIES + (Fraction(1),))

    def scalar(self) -> Fraction:
        return self.pick(_CONSTANTS)

    def var(self, pool: Optional[Sequence[str]] = None) -> str:
        return self.pick(tuple(pool) if pool is not None else self.vars)

    # ── heaps, arithmetic, guards ────────────────────────────────────────────

    def heap(self, cells: Optional[int] = None) -> Heap:
        budget = min(self.spec.heap_cells if cells is None else cells, self.cfg.addr_count)
        n = int(self.rng.integers(0, budget + 1))
        addrs = self.rng.choice(np.arange(1, self.cfg.addr_count + 1), size=n, replace=False)
        return Heap({int(a): self.value() for a in addrs})

    def arith(self, pool: Optional[Sequence[str]] = None) -> ArithExpr:
        pool = self.vars if pool is None else pool
        if pool and self.chance(0.6):
            return Var(self.var(pool))
        return Const(self.value())

    def address(self, pool: Optional[Sequence[str]] = None) -> ArithExpr:
        """A variable, a variable plus one, or a constant address."""
        pool = self.vars if pool is None else pool
        roll = self.rng.random()
        if pool and roll < 0.6:
            return Var(self.var(pool))
        if pool and roll < 0.75:
            return BinOp("+", Var(self.var(pool)), Const(1))
        return Const(int(self.rng.integers(1, self.cfg.addr_count + 1)))

    def guard(self, depth: int = 1, pool: Optional[Sequence[str]] = None) -> GuardExpr:
        pool = self.vars if pool is None else pool
        if depth <= 0 or self.chance(0.6):
            op = self.pick(("=", "!=", "<", "<="))
            if not pool:
                return Compare(op, Const(self.value()), Const(self.value()))
            return Compare(op, Var(self.var(pool)), self.arith(pool))
        kind = self.pick(("and", "or", "not"))
        if kind == "not":
            return Not(self.guard(depth - 1, pool))
        node = And if kind == "and" else Or
        return node(self.guard(depth - 1, pool), self.guard(depth - 1, pool))

    # ── expectations ─────────────────────────────────────────────────────────

    def constant(self) -> EConst:
        if self.spec.allow_infinity and self.chance(0.1):
            return INF_E
        return const(self.scalar())

    def _heap_atom(self, pool: Sequence[str]) -> Expectation:
        kind = self.pick(("emp", "pt", "pt2", "valid", "contains", "contains_any"))
        if kind == "emp":
            return EMP
        if kind == "pt":
            return PointsTo(self.address(pool), (self.arith(pool),))
        if kind == "pt2":
            return PointsTo(self.address(pool), (self.arith(pool), self.arith(pool)))
        if kind == "valid":
            return ValidPointer(self.address(pool))
        if kind == "contains":
            return Contains(self.address(pool), self.arith(pool))
        return ContainsAny(self.address(pool))

    def _leaf(self, pool: Sequence[str]) -> Expectation:
        kind = self.pick(("const", "iverson", "heap", "heap", "size", "ls", "len"))
        if kind == "const":
            return self.constant()
        if kind == "iverson":
            return Iverson(self.guard(1, pool))
        if kind == "size":
            return SIZE
        if kind == "ls":
            return ListSegment(self.arith(pool), self.arith(pool))
        if kind == "len":
            return ListLength(self.arith(pool), self.arith(pool))
        return self._heap_atom(pool)

    def expectation(self, depth: Optional[int] = None, pool: Optional[Sequence[str]] = None) -> Expectation:
        depth = self.spec.expr_depth if depth is None else depth
        pool = self.vars if pool is None else tuple(pool)
        if depth <= 0 or self.chance(0.3):
            return self._leaf(pool)
        kinds = ["add", "mul", "max", "min", "monus", "sep", "sep", "sup"]
        if self.spec.allow_infinity:
            kinds.append("wand")
        kind = self.pick(kinds)
        if kind == "sup":
            inner = tuple(pool) + (self.bound_var,)
            return Sup(self.bound_var, self.expectation(depth - 1, inner))
        if kind == "wand":
            return SepImp(self.predicate(depth - 1, pool), self.expectation(depth - 1, pool))
        node = {"add": Add, "mul": Mul, "max": Max, "min": Min, "monus": Monus, "sep": SepCon}[kind]
        return node(self.expectation(depth - 1, pool), self.expectation(depth - 1, pool))

    def predicate(self, depth: Optional[int] = None, pool: Optional[Sequence[str]] = None) -> Expectation:
        """An expectation that is syntactically 0/1-valued."""
        depth = self.spec.expr_depth if depth is None else depth
        pool = self.vars if pool is None else tuple(pool)
        if depth <= 0 or self.chance(0.35):
            kind = self.pick(("iverson", "heap", "heap", "ls", "bool"))
            if kind == "iverson":
                result: Expectation = Iverson(self.guard(1, pool))
            elif kind == "ls":
                result = ListSegment(self.arith(pool), self.arith(pool))
            elif kind == "bool":
                result = const(self.pick((0, 1)))
            else:
                result = self._heap_atom(pool)
        else:
            kind = self.pick(("mul", "max", "sep", "sep", "not"))
            if kind == "not":
                result = OneMinus(self.predicate(depth - 1, pool))
            else:
                node = {"mul": Mul, "max": Max, "sep": SepCon}[kind]
                result = node(self.predicate(depth - 1, pool), self.predicate(depth - 1, pool))
        assert is_predicate(result)
        return result

    def pure(self, depth: Optional[int] = None, pool: Optional[Sequence[str]] = None) -> Expectation:
        """An expectation that does not depend on the heap."""
        depth = self.spec.expr_depth if depth is None else depth
        pool = self.vars if pool is None else tuple(pool)
        if depth <= 0 or self.chance(0.4):
            if pool and self.chance(0.6):
                return Iverson(self.guard(1, pool))
            return self.constant()
        node = self.pick((Add, Mul, Max, Min))
        return node(self.pure(depth - 1, pool), self.pure(depth - 1, pool))

    def domain_exact(self, depth: Optional[int] = None, *, predicate: bool = False) -> Expectation:
        """An expectation whose positive heaps share one domain per stack."""
        depth = self.spec.expr_depth if depth is None else depth
        if depth <= 0 or self.chance(0.4):
            kind = self.pick(("emp", "pt", "valid"))
            if kind == "emp":
                return EMP
            if kind == "pt":
                return PointsTo(self.address(), (self.arith(),))
            return ValidPointer(self.address())
        if self.chance(0.5):
            return SepCon(self.domain_exact(depth - 1, predicate=predicate),
                          self.domain_exact(depth - 1, predicate=predicate))
        scale = Iverson(self.guard(1)) if predicate else self.pure(1)
        return Mul(scale, self.domain_exact(depth - 1, predicate=predicate))

    def one_bounded(self, depth: Optional[int] = None) -> Expectation:
        """An expectation with values in [0, 1]."""
        depth = self.spec.expr_depth if depth is None else depth
        if depth <= 0 or self.chance(0.4):
            if self.chance(0.5):
                return self.predicate(1)
            return Mul(const(self.rational()), self.predicate(1))
        node = self.pick((Mul, Max, Min))
        return node(self.one_bounded(depth - 1), self.one_bounded(depth - 1))

    # ── separation logic ─────────────────────────────────────────────────────

    def sl_formula(self, depth: Optional[int] = None, pool: Optional[Sequence[str]] = None) -> SLFormula:
        depth = self.spec.expr_depth if depth is None else depth
        pool = self.vars if pool is None else tuple(pool)
        if depth <= 0 or self.chance(0.35):
            kind = self.pick(("pure", "emp", "pt", "pt"))
            if kind == "pure":
                return SLPure(self.guard(1, pool))
            if kind == "emp":
                return SLEmp()
            return SLPointsTo(self.address(pool), (self.arith(pool),))
        kind = self.pick(("and", "not", "star", "star", "exists", "wand"))
        if kind == "not":
            return SLNot(self.sl_formula(depth - 1, pool))
        if kind == "exists":
            inner = tuple(pool) + (self.bound_var,)
            return SLExists(self.bound_var, self.sl_formula(depth - 1, inner))
        if kind == "wand":
            # a points-to left operand keeps the extension enumeration to one block
            left = SLPointsTo(self.address(pool), (self.arith(pool),))
            return SLWand(left, self.sl_formula(depth - 1, pool))
        node = SLAnd if kind == "and" else SLStar
        return node(self.sl_formula(depth - 1, pool), self.sl_formula(depth - 1, pool))

    # ── programs ─────────────────────────────────────────────────────────────

    def program(
        self,
        length: Optional[int] = None,
        *,
        allow_alloc: Optional[bool] = None,
        allow_loops: Optional[bool] = None,
        probabilistic: bool = True,
    ) -> Program:
        """A program of at most ``length`` atomic statements.

        Stored values are constants or variables, so no assignment leaves V;
        allocations are single cells and never occur inside loops.
        """
        length = self.spec.program_length if length is None else length
        alloc = self.spec.allow_alloc if allow_alloc is None else allow_alloc
        loops = self.spec.allow_loops if allow_loops is None else allow_loops
        n = int(self.rng.integers(1, length + 1))
        return seq(*(self._statement(alloc, loops, probabilistic, depth=2) for _ in range(n)))

    def _atomic(self, alloc: bool, probabilistic: bool) -> Program:
        kinds = ["skip", "assign", "assign", "lookup", "mutate", "free"]
        if alloc:
            kinds.append("alloc")
        if probabilistic:
            kinds.append("uniform")
        kind = self.pick(kinds)
        x = self.var()
        if kind == "skip":
            return SKIP
        if kind == "assign":
            return Assign(x, self.arith())
        if kind == "lookup":
            return Lookup(x, self.address())
        if kind == "mutate":
            return Mutate(self.address(), self.arith())
        if kind == "free":
            return Free(self.address())
        if kind == "alloc":
            return Alloc(x, (self.arith(),))
        low = self.value()
        high = int(self.rng.integers(low, self.cfg.vmax + 1))
        return Uniform(x, Const(low), Const(high))

    def _statement(self, alloc: bool, loops: bool, probabilistic: bool, depth: int) -> Program:
        if depth <= 0 or self.chance(0.6):
            return self._atomic(alloc, probabilistic)
        kinds = ["ite"]
        if probabilistic:
            kinds.append("pchoice")
        if loops:
            kinds.append("while")
        kind = self.pick(kinds)
        if kind == "while":
            return While(self.guard(1), self._statement(False, False, probabilistic, depth - 1))
        left = self._statement(alloc, loops, probabilistic, depth - 1)
        right = self._statement(alloc, loops, probabilistic, depth - 1)
        if kind == "pchoice":
            return PChoice(left, self.pick(_PROBABILITIES), right)
        return Ite(self.guard(1), left, right)


def generate(kind: ArtifactKind, spec: GenSpec) -> Any:
    """One artifact of ``kind`` drawn from a generator seeded with ``spec.seed``."""
    gen = ArtifactGenerator(spec)
    if kind is ArtifactKind.HEAP:
        return gen.heap()
    if kind is ArtifactKind.EXPECTATION:
        return gen.expectation()
    if kind is ArtifactKind.PREDICATE:
        return gen.predicate()
    return gen.program()
