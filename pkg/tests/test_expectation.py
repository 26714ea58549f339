"""Tests for QSL expectations: values, connectives, predicates and the SL embedding."""

import pytest

from app.domain.expectation import (
    INF, ONE, ZERO, ExtQ, Mul, SepCon, Size, Sup,
    broken_sepcon, classify_expectation, embed_sl, entails, equivalent, eval_expectation,
    eval_fixpoint_predicate, free_vars_expectation, is_predicate, parse_expectation, parse_sl_formula,
    render_expectation, sl_satisfies, substitute,
)
from app.domain.state import Heap, ProgState, Stack, enumerate_states
from app.domain.syntax import Const, Var
from app.models.enums import Verdict
from app.models.errors import InputError, OperandRangeError, ParseError
from app.models.schemas import DomainConfig

SMALL = DomainConfig(vars=("x",), vmin=0, vmax=2, addr_count=2)

# h = {1 ↦ 2, 2 ↦ 3, 4 ↦ 5}, address 3 free
WORKED = DomainConfig(vars=("x",), vmin=0, vmax=5, addr_count=4)
WORKED_STATE = ProgState(Stack({"x": 0}), Heap({1: 2, 2: 3, 4: 5}))


def value(text: str, state: ProgState = WORKED_STATE, cfg: DomainConfig = WORKED) -> ExtQ:
    return eval_expectation(parse_expectation(text), state, cfg)


class TestExtendedRationals:
    """Test arithmetic on ℚ≥0 ∪ {∞}."""

    def test_zero_times_infinity(self):
        assert ZERO * INF == ZERO
        assert INF * ZERO == ZERO
        assert ExtQ(2) * INF == INF

    def test_monus(self):
        assert ExtQ(2).monus(3) == 0
        assert INF.monus(3) == INF
        assert ExtQ(3).monus(INF) == 0

    def test_order_and_rendering(self):
        assert ExtQ("1/2") < ONE < INF
        assert str(ExtQ("3/6")) == "1/2"
        assert str(INF) == "inf"

    def test_negative_rejected(self):
        with pytest.raises(InputError):
            ExtQ(-1)

    def test_evaluated_zero_times_infinity(self):
        assert value("0 * inf") == 0
        assert value("inf * 0") == 0
        assert value("inf .- 3") == INF


class TestSeparatingConnectives:
    """Test ⋆ and −⋆ on the worked example heap."""

    def test_points_to_star_size(self):
        assert value("1 |-> 2 ** size") == 2

    def test_wand_adds_a_cell(self):
        assert value("3 |-> 4 -* size") == 4

    def test_star_without_footprint_is_zero(self):
        assert value("3 |-> 4 ** size") == 0
        assert value("1 |-> 2 ** 1 |-> 2 ** size") == 0

    def test_star_cancels_wand(self):
        assert value("1 |-> 2 ** (1 |-> 2 -* size)") == 3
        assert value("3 |-> 4 -* (3 |-> 4 ** size)") == 3

    def test_wand_without_extension_is_infinite(self):
        assert value("1 |-> 2 -* size") == INF
        assert value("3 |-> 4 -* (3 |-> 4 -* size)") == INF

    def test_sepcon_with_non_atomic_operands(self):
        assert value("size ** [emp]") == 3
        assert value("max(size, 1) ** size") == 3

    def test_wand_needs_predicate_on_the_left(self):
        with pytest.raises(InputError):
            value("size -* size")

    def test_error_sepcon_requires_one_bounded_operands(self):
        with pytest.raises(OperandRangeError):
            value("2 @* [emp]")

    def test_error_connectives(self):
        state = ProgState(Stack({"x": 1}), Heap({1: 0}))
        assert value("x |-> 0 @* [emp]", state, SMALL) == 1
        assert value("x |-> 1 @* [emp]", state, SMALL) == 1
        assert value("2 |-> 0 -@ [emp]", state, SMALL) == 0
        assert value("1 |-> 0 -@ [emp]", state, SMALL) == 0

    def test_broken_sepcon_changes_results(self):
        e = parse_expectation("size ** 1")
        state = ProgState(Stack({"x": 0}), Heap({1: 0}))
        assert eval_expectation(e, state, SMALL) == 1
        with broken_sepcon():
            assert eval_expectation(e, state, SMALL) == 0
        assert eval_expectation(e, state, SMALL) == 1


class TestQuantitativeOperators:
    """Test arithmetic, quantifiers and Iverson brackets."""

    def test_arithmetic(self):
        assert value("1/2 * size + 1") == ExtQ("5/2")
        assert value("max(size, 5)") == 5
        assert value("min(size, 1/3)") == ExtQ("1/3")
        assert value("sum(1; 2; size)") == 6

    def test_quantifiers_range_over_values(self):
        assert value("sup v. (1 |-> v ** size)") == 2
        assert value("sup v. [v = 4]") == 1
        assert value("inf v. [v = 4]") == 0

    def test_one_minus(self):
        assert value("1 - [x = 0]") == 0
        with pytest.raises(OperandRangeError):
            value("1 - size")

    def test_power(self):
        assert value("pow(1/2, size)") == ExtQ("1/8")

    def test_pointer_atoms(self):
        state = ProgState(Stack({"x": 1}), Heap({1: 0, 2: 1}))
        assert value("x ~> 0", state, SMALL) == 1
        assert value("x ~> -", state, SMALL) == 1
        assert value("x |-> -", state, SMALL) == 0
        assert value("x |-> 0, 1", state, SMALL) == 1


class TestRecursivePredicates:
    """Test ls, len, tree and path."""

    def test_list_segment(self):
        state = ProgState(Stack({"x": 1}), Heap({1: 2, 2: 0}))
        assert value("ls(x, 0)", state, SMALL) == 1
        assert value("len(x, 0)", state, SMALL) == 2
        assert value("ls(2, 0)", state, SMALL) == 0

    def test_list_segment_is_precise(self):
        cfg = DomainConfig(vars=("x",), vmin=0, vmax=3, addr_count=3)
        state = ProgState(Stack({"x": 1}), Heap({1: 2, 2: 0, 3: 0}))
        assert value("ls(x, 0)", state, cfg) == 0

    def test_cyclic_list(self):
        state = ProgState(Stack({"x": 1}), Heap({1: 2, 2: 1}))
        assert value("ls(x, 0)", state, SMALL) == 0
        assert value("len(x, 0)", state, SMALL) == 0

    def test_split_is_strict_on_a_cycle(self):
        # 1 ↦ 2 ↦ 1: no segment from 1 back to 1 owns both cells, but the split through 2 does
        state = ProgState(Stack({"x": 1}), Heap({1: 2, 2: 1}))
        assert value("ls(x, x)", state, SMALL) == 0
        assert value("sup v. (ls(x, v) ** ls(v, x))", state, SMALL) == 1

    def test_empty_segment(self):
        state = ProgState(Stack({"x": 0}), Heap())
        assert value("ls(x, 0)", state, SMALL) == 1
        assert value("len(x, 0)", state, SMALL) == 0

    def test_tree_and_height(self):
        cfg = DomainConfig(vars=("x",), vmin=0, vmax=5, addr_count=5)
        # root 2 with one child at 4; address 1 stays free so that null + 1 is unallocated
        tree = ProgState(Stack({"x": 2}), Heap({2: 4, 3: 0, 4: 0, 5: 0}))
        assert value("tree(x)", tree, cfg) == 1
        assert value("path(2, x)", tree, cfg) == 2
        assert value("tree_height(x)", tree, cfg) == 2

    def test_cycle_is_not_a_tree(self):
        state = ProgState(Stack({"x": 1}), Heap({1: 1, 2: 0}))
        assert value("tree(x)", state, SMALL) == 0

    def test_direct_predicate_entry_point(self):
        state = ProgState(Stack({"x": 1}), Heap({1: 2, 2: 0}))
        assert eval_fixpoint_predicate("len", (1, 0), state) == 2
        with pytest.raises(InputError):
            eval_fixpoint_predicate("ls", (1,), state)

    def test_path_record_size_validated(self):
        with pytest.raises(ParseError):
            parse_expectation("path(0, x)")


class TestSyntax:
    """Test expectation parsing and printing."""

    @pytest.mark.parametrize("text", [
        "1/2 * [x = 0] + size",
        "x |-> 0 ** (x |-> 0 -* size)",
        "sup v. (x |-> v ** ls(v, 0))",
        "1 - (x ~> -)",
        "max(pow(1/2, size), [emp]) .- 1",
    ])
    def test_round_trip(self, text):
        e = parse_expectation(text)
        assert parse_expectation(render_expectation(e)) == e

    def test_precedence(self):
        e = parse_expectation("1 * size ** [emp]")
        assert isinstance(e, SepCon)
        assert isinstance(e.left, Mul)

    def test_substitution_avoids_capture(self):
        e = parse_expectation("sup v. [x = v]")
        result = substitute(e, "x", Var("v"))
        assert isinstance(result, Sup)
        assert result.var != "v"
        state = ProgState(Stack({"x": 0, "v": 3}), Heap())
        cfg = DomainConfig(vars=("x", "v"), vmin=0, vmax=3, addr_count=1)
        assert eval_expectation(result, state, cfg) == 1

    def test_substitution_of_constant(self):
        e = substitute(parse_expectation("x |-> x"), "x", Const(1))
        assert e == parse_expectation("1 |-> 1")

    def test_is_predicate(self):
        assert is_predicate(parse_expectation("[x = 0] * x |-> 1"))
        assert is_predicate(parse_expectation("ls(x, 0) ** [emp]"))
        assert not is_predicate(parse_expectation("size"))
        assert not is_predicate(parse_expectation("1/2 * [emp]"))

    def test_free_variables_exclude_binders(self):
        assert free_vars_expectation(parse_expectation("sup v. [x = v]")) == {"x"}
        assert free_vars_expectation(parse_expectation("ls(y, 0) ** size")) == {"y"}
        assert free_vars_expectation(parse_expectation("1/2")) == frozenset()


class TestEntailment:
    """Test pointwise entailment and equivalence over the bounded model."""

    def test_points_to_entails_contains(self):
        e1, e2 = parse_expectation("x |-> 0"), parse_expectation("x ~> 0")
        assert entails(e1, e2, SMALL, 2).holds
        result = entails(e2, e1, SMALL, 2)
        assert result.verdict is Verdict.COUNTEREXAMPLE
        assert result.lhs == 1 and result.rhs == 0
        assert len(result.state.heap) == 2

    def test_sepcon_commutes(self):
        e1 = parse_expectation("x ~> - ** size")
        e2 = parse_expectation("size ** x ~> -")
        assert equivalent(e1, e2, SMALL, 2).holds

    def test_witness_reports_first_difference(self):
        result = equivalent(Size(), parse_expectation("[emp]"), SMALL, 1)
        assert not result.holds
        assert result.state.heap == Heap()
        assert (result.lhs, result.rhs) == (ZERO, ONE)


class TestClassification:
    """Test the pure, domain-exact and intuitionistic flags."""

    def test_pure(self):
        flags = classify_expectation(parse_expectation("[x = 0]"), SMALL, 2)
        assert flags.pure and flags.intuitionistic

    def test_emp_is_domain_exact(self):
        flags = classify_expectation(parse_expectation("[emp]"), SMALL, 2)
        assert flags.domain_exact and not flags.pure and not flags.intuitionistic

    def test_contains_is_intuitionistic(self):
        flags = classify_expectation(parse_expectation("x ~> -"), SMALL, 2)
        assert flags.intuitionistic and not flags.domain_exact

    def test_size_is_intuitionistic(self):
        flags = classify_expectation(Size(), SMALL, 2)
        assert flags.intuitionistic and not flags.domain_exact


class TestEmbedding:
    """Test that embedded SL formulas agree with direct satisfaction."""

    @pytest.mark.parametrize("text", [
        "emp",
        "x |-> 0 ** true",
        "exists v. x |-> v",
        "~emp & [x = 1]",
        "x |-> 0 -* (x |-> 0 ** true)",
        "(1 |-> 0) -* false",
    ])
    def test_embedding_agrees_with_satisfaction(self, text):
        phi = parse_sl_formula(text)
        e = embed_sl(phi)
        for state in enumerate_states(SMALL, 2):
            expected = ONE if sl_satisfies(state, phi, SMALL) else ZERO
            assert eval_expectation(e, state, SMALL) == expected, state

    def test_embedding_is_one_bounded(self):
        e = embed_sl(parse_sl_formula("emp -* x |-> 0"))
        assert all(
            eval_expectation(e, state, SMALL) <= ONE
            for state in enumerate_states(SMALL, 1)
        )


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
