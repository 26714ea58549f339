"""Law records and the per-trial checking context."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable, Optional

from app.domain.expectation import Expectation, ExtQ, compile_expectation
from app.domain.state import ProgState, disjoint_union, enumerate_states, heap_extensions, render_heap
from app.domain.syntax import Program, count_allocs
from app.models.schemas import DomainConfig

from .generators import ArtifactGenerator

StatePredicate = Callable[[ProgState], bool]


@dataclass(frozen=True)
class Witness:
    """A state where a law fails, with the two compared sides."""
    state: Optional[ProgState] = None
    lhs: Optional[ExtQ] = None
    rhs: Optional[ExtQ] = None
    note: Optional[str] = None


@dataclass(frozen=True)
class Law:
    """One executable law.

    ``operands`` draws the law's random operands from a trial generator;
    ``check`` evaluates the law on them and returns a witness or None.
    """
    law_id: str
    description: str
    operands: Callable[[ArtifactGenerator], dict[str, Any]]
    check: Callable[[dict[str, Any], "LawContext"], Optional[Witness]]
    # laws whose bounded-model validity needs every heap of the model enumerated
    full_heaps: bool = False


@dataclass
class LawContext:
    cfg: DomainConfig
    max_cells: int
    notes: list[str] = field(default_factory=list)

    @cached_property
    def states(self) -> tuple[ProgState, ...]:
        return enumerate_states(self.cfg, self.max_cells)

    def program_cells(self, c: Program) -> int:
        """Heap bound under which every allocation of ``c`` finds a free cell."""
        return max(0, min(self.max_cells, self.cfg.addr_count - count_allocs(c)))

    def fn(self, e: Expectation) -> Callable[[ProgState], ExtQ]:
        compiled = compile_expectation(e, self.cfg)
        return lambda state: compiled(state.stack, state.heap)

    # ── pointwise comparisons ────────────────────────────────────────────────

    def _compare(
        self,
        lhs: Callable[[ProgState], ExtQ],
        rhs: Callable[[ProgState], ExtQ],
        equal: bool,
        where: Optional[StatePredicate],
        states: Optional[Iterable[ProgState]],
    ) -> Optional[Witness]:
        for state in self.states if states is None else states:
            if where is not None and not where(state):
                continue
            a, b = lhs(state), rhs(state)
            if (a != b) if equal else (b < a):
                return Witness(state, a, b)
        return None

    def equal(self, e1: Expectation, e2: Expectation, where: Optional[StatePredicate] = None) -> Optional[Witness]:
        return self._compare(self.fn(e1), self.fn(e2), True, where, None)

    def entails(self, e1: Expectation, e2: Expectation, where: Optional[StatePredicate] = None) -> Optional[Witness]:
        return self._compare(self.fn(e1), self.fn(e2), False, where, None)

    def equal_fn(self, f1, f2, states: Optional[Iterable[ProgState]] = None) -> Optional[Witness]:
        return self._compare(f1, f2, True, None, states)

    def entails_fn(self, f1, f2, states: Optional[Iterable[ProgState]] = None) -> Optional[Witness]:
        return self._compare(f1, f2, False, None, states)

    def intuitionistic(self, e: Expectation) -> Optional[Witness]:
        """e(h) ⪯ e(h ⊎ {a ↦ v}) for every one-cell extension inside the model."""
        f = compile_expectation(e, self.cfg)
        for s, h in self.states:
            if len(h) >= self.max_cells:
                continue
            before = f(s, h)
            for ext in heap_extensions(self.cfg, h):
                if len(ext) != 1:
                    continue
                bigger = disjoint_union(h, ext)
                after = f(s, bigger)
                if after < before:
                    return Witness(ProgState(s, h), before, after, note=f"grows to {render_heap(bigger)}")
        return None
