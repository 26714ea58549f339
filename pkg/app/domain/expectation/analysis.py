"""Semantic classification of expectations relative to the bounded model."""

from collections import defaultdict
from dataclasses import dataclass

from app.domain.state import Heap, enumerate_heaps, enumerate_stacks
from app.models.schemas import DomainConfig

from .ast import Expectation
from .evaluator import compile_expectation
from .values import ExtQ


@dataclass(frozen=True)
class ExpectationClass:
    pure: bool
    domain_exact: bool
    intuitionistic: bool

    def as_dict(self) -> dict[str, bool]:
        return {"pure": self.pure, "domain_exact": self.domain_exact, "intuitionistic": self.intuitionistic}


def classify_expectation(e: Expectation, cfg: DomainConfig, max_cells: int) -> ExpectationClass:
    """Decide each classification flag by exhaustive evaluation.

    - pure: the value does not depend on the heap for any stack;
    - domain-exact: for each stack, all heaps with a positive value share one domain;
    - intuitionistic: adding one cell never lowers the value. Every inclusion
      h ⊆ h' between enumerated heaps is a chain of such single-cell steps.
    """
    fn = compile_expectation(e, cfg)
    heaps = enumerate_heaps(cfg, max_cells)
    pure = domain_exact = intuitionistic = True

    for s in enumerate_stacks(cfg):
        table = {h: fn(s, h) for h in heaps}
        if pure and len(set(table.values())) > 1:
            pure = False
        if domain_exact:
            domains = {h.domain for h, v in table.items() if not v.is_zero()}
            domain_exact = len(domains) <= 1
        if intuitionistic:
            intuitionistic = _monotone_under_extension(table, cfg, max_cells)
        if not (pure or domain_exact or intuitionistic):
            break

    return ExpectationClass(pure=pure, domain_exact=domain_exact, intuitionistic=intuitionistic)


def _monotone_under_extension(table: dict[Heap, ExtQ], cfg: DomainConfig, max_cells: int) -> bool:
    by_size: dict[int, list[Heap]] = defaultdict(list)
    for h in table:
        by_size[len(h)].append(h)
    for size in range(max_cells):
        for h in by_size[size]:
            for a in cfg.addresses:
                if a in h:
                    continue
                for v in cfg.values:
                    if table[h.updated(a, v)] < table[h]:
                        return False
    return True
