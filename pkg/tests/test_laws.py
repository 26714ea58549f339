"""Tests for the law bench: selection, seeded generation, suite runs and replay."""

import pytest
from hypothesis import given, settings, strategies as st

from app.domain.expectation import Size, broken_sepcon, is_predicate, parse_expectation
from app.domain.syntax import is_loop_free
from app.laws import (
    BROKEN_SEPCON_HOOK, LAWS, ArtifactGenerator, LawContext,
    decode_operand, encode_operand, generate, replay_witness, run_law_suite, select_laws,
)
from app.models.enums import ArtifactKind
from app.models.errors import InputError
from app.models.schemas import DomainConfig, GenSpec, LawViolation, Operand

TINY = DomainConfig(vars=("x",), vmin=0, vmax=2, addr_count=2)
CHEAP_LAWS = "sepcon.comm,sepcon.unit,pure.mul_eq_sep,wp.strict"


def tiny_spec(seed: int = 0) -> GenSpec:
    return GenSpec(seed=seed, expr_depth=2, heap_cells=2, program_length=2, domain=TINY)


def broken_violation(hooks: list[str]) -> LawViolation:
    return LawViolation(
        law_id="intuit.sep_true_above", trial=0, operands={"X": encode_operand(Size())}, hooks=hooks,
    )


class TestSelection:
    """Test glob selection over the catalog."""

    def test_all_laws_by_default(self):
        assert len(select_laws()) == len(LAWS)
        assert len(select_laws("")) == len(LAWS)

    def test_glob_patterns(self):
        chosen = select_laws("sepcon.*")
        assert chosen
        assert all(law.law_id.startswith("sepcon.") for law in chosen)

    def test_comma_separated_patterns_keep_catalog_order(self):
        ids = [law.law_id for law in select_laws("wp.strict, sepcon.comm")]
        assert ids == ["sepcon.comm", "wp.strict"]

    def test_no_match(self):
        with pytest.raises(InputError):
            select_laws("nothing.here")

    def test_catalog_covers_every_family(self):
        families = {law_id.split(".")[0] for law_id in LAWS}
        assert {"sepcon", "sepimp", "pure", "intuit", "heapsize", "lists", "wp", "frame", "duality"} <= families


class TestGeneration:
    """Test seeded artifact generation."""

    def test_trials_are_reproducible(self):
        first = ArtifactGenerator.for_trial(tiny_spec(5), "sepcon.comm", 3).expectation()
        second = ArtifactGenerator.for_trial(tiny_spec(5), "sepcon.comm", 3).expectation()
        assert first == second

    @given(seed=st.integers(min_value=0, max_value=2**16))
    @settings(max_examples=30, deadline=None)
    def test_heaps_respect_budgets(self, seed):
        h = ArtifactGenerator(tiny_spec(seed)).heap()
        assert len(h) <= 2
        assert all(a in TINY.addresses for a in h.domain)
        assert all(TINY.in_domain(v) for _, v in h.cells)

    @given(seed=st.integers(min_value=0, max_value=2**16))
    @settings(max_examples=30, deadline=None)
    def test_predicates_are_predicates(self, seed):
        assert is_predicate(ArtifactGenerator(tiny_spec(seed)).predicate())

    @given(seed=st.integers(min_value=0, max_value=2**16))
    @settings(max_examples=30, deadline=None)
    def test_programs_without_loops(self, seed):
        assert is_loop_free(ArtifactGenerator(tiny_spec(seed)).program())

    def test_generate_by_kind(self):
        assert generate(ArtifactKind.HEAP, tiny_spec(9)) == ArtifactGenerator(tiny_spec(9)).heap()
        assert is_predicate(generate(ArtifactKind.PREDICATE, tiny_spec(9)))
        assert is_loop_free(generate(ArtifactKind.PROGRAM, tiny_spec(9)))


class TestSuite:
    """Test suite runs on a tiny bounded model."""

    @given(seed=st.integers(min_value=0, max_value=2**10))
    @settings(max_examples=5, deadline=None)
    def test_cheap_laws_hold(self, seed):
        report = run_law_suite(CHEAP_LAWS, tiny_spec(seed), trials=3)
        assert [r.law_id for r in report.results] == ["sepcon.comm", "sepcon.unit", "pure.mul_eq_sep", "wp.strict"]
        assert report.total_violations == 0
        assert all(r.trials == 3 for r in report.results)

    def test_report_records_seed_and_model(self):
        report = run_law_suite("sepcon.comm", tiny_spec(11), trials=1)
        assert report.seed == 11
        assert report.config == TINY


class TestTightestIntuitionistic:
    """Test the laws quantifying over intuitionistic bounds."""

    def test_sep_true_below_dominating_candidates(self):
        law = LAWS["intuit.sep_true_tightest"]
        ctx = LawContext(cfg=TINY, max_cells=2)
        operands = {"X": parse_expectation("[emp]"), "W": parse_expectation("size")}
        assert law.check(operands, ctx) is None

    def test_wand_true_above_dominated_candidates(self):
        law = LAWS["intuit.wand_true_tightest"]
        assert law.full_heaps
        ctx = LawContext(cfg=TINY, max_cells=TINY.addr_count)
        operands = {"X": parse_expectation("size + [x = 0]"), "W": parse_expectation("size")}
        assert law.check(operands, ctx) is None

    @given(seed=st.integers(min_value=0, max_value=2**10))
    @settings(max_examples=5, deadline=None)
    def test_suite_has_no_violations(self, seed):
        report = run_law_suite("intuit.*_tightest", tiny_spec(seed), trials=3)
        assert [r.law_id for r in report.results] == ["intuit.sep_true_tightest", "intuit.wand_true_tightest"]
        assert report.total_violations == 0


class TestBrokenHook:
    """Test that evaluating ⋆ with min is noticed."""

    def test_law_catches_broken_sepcon(self):
        law = LAWS["intuit.sep_true_above"]
        ctx = LawContext(cfg=TINY, max_cells=2)
        assert law.check({"X": Size()}, ctx) is None
        with broken_sepcon():
            witness = law.check({"X": Size()}, ctx)
        assert witness is not None
        assert witness.rhs < witness.lhs

    def test_replay_reapplies_hooks(self):
        assert replay_witness(broken_violation([BROKEN_SEPCON_HOOK]), tiny_spec()) is not None
        assert replay_witness(broken_violation([]), tiny_spec()) is None

    def test_unknown_hook(self):
        with pytest.raises(InputError):
            replay_witness(broken_violation(["flaky_wand"]), tiny_spec())

    def test_unknown_law(self):
        violation = LawViolation(law_id="sepcon.nope", trial=0)
        with pytest.raises(InputError):
            replay_witness(violation, tiny_spec())


class TestOperands:
    """Test operand encoding for witness replay."""

    def test_expectation_operand(self):
        operand = encode_operand(Size())
        assert operand == Operand(kind="expectation", text="size")
        assert decode_operand(operand) == Size()

    def test_unknown_kind(self):
        with pytest.raises(InputError):
            decode_operand(Operand(kind="blob", text="?"))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
