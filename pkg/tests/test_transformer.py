"""Tests for the weakest-preexpectation transformers and the theorem checks."""

from fractions import Fraction

import pytest

from app.domain.expectation import ONE, ZERO, ExtQ, eval_expectation, parse_expectation, parse_sl_formula
from app.domain.state import Heap, ProgState, Stack, enumerate_states
from app.domain.syntax import parse_guard, parse_program
from app.domain.transformer import (
    MODES, WEP, WLP, WP,
    check_conservativity, check_duality, check_frame, check_invariant, loop_fixpoint, mode_by_name, transform,
    wp_function,
)
from app.models.enums import ExhaustionPolicy, FixpointStatus, FrameDirection, InvariantDirection, Verdict
from app.models.errors import (
    AddressSpaceExhausted, InputError, OperandRangeError, UniformRangeError, ValueDomainExceeded,
)
from app.models.schemas import DomainConfig

CFG = DomainConfig(vars=("x", "y"), vmin=0, vmax=2, addr_count=2)


def state(x: int = 0, y: int = 0, **cells: int) -> ProgState:
    return ProgState(Stack({"x": x, "y": y}), Heap({int(a[1:]): v for a, v in cells.items()}))


def wp_at(mode_name: str, program: str, post: str, at: ProgState, **options) -> ExtQ:
    fn, _ = wp_function(mode_by_name(mode_name), parse_program(program), parse_expectation(post), CFG, **options)
    return fn(at)


class TestModes:
    """Test the eight calculi and their duals."""

    def test_eight_modes(self):
        assert sorted(MODES) == sorted(["wp", "awp", "wlp", "awlp", "wep", "awep", "wlep", "awlep"])

    def test_dual_flips_every_component(self):
        assert WP.dual().name == "awlep"
        assert mode_by_name("wlp").dual().name == "awep"
        assert all(m.dual().dual() == m for m in MODES.values())

    def test_unknown_mode(self):
        with pytest.raises(InputError):
            mode_by_name("wpp")


class TestStatements:
    """Test the transformer rules statement by statement."""

    def test_free_on_emp_is_points_to_any(self):
        result = transform(WP, parse_program("free(x)"), parse_expectation("[emp]"), CFG, 2)
        expected = parse_expectation("x |-> -")
        for s, v in result.items():
            assert v == eval_expectation(expected, s, CFG)
        assert result.status is FixpointStatus.EXACT

    def test_faults_count_in_extrinsic_modes(self):
        assert wp_at("wp", "free(x)", "[emp]", state(x=1)) == 0
        assert wp_at("wlp", "free(x)", "[emp]", state(x=1)) == 0
        assert wp_at("wep", "free(x)", "[emp]", state(x=1)) == 1
        assert wp_at("wlep", "<x> := 1", "0", state(x=2)) == 1

    def test_assignment(self):
        assert wp_at("wp", "x := x + 1", "[x = 2]", state(x=1)) == 1
        assert wp_at("wp", "x := x + 1", "[x = 2]", state(x=0)) == 0

    def test_assignment_outside_value_domain(self):
        with pytest.raises(ValueDomainExceeded):
            wp_at("wp", "x := x + 1", "1", state(x=2))

    def test_lookup_and_mutation(self):
        assert wp_at("wp", "y := <x>", "[y = 2]", state(x=1, a1=2)) == 1
        assert wp_at("wp", "<x> := 2; y := <x>", "[y = 2] * x |-> 2", state(x=1, a1=0)) == 1
        assert wp_at("wp", "y := <x>", "1", state(x=1)) == 0

    def test_probabilistic_choice(self):
        assert wp_at("wp", "{ x := 1 } [1/3] { x := 2 }", "[x = 1]", state()) == ExtQ(Fraction(1, 3))

    def test_uniform(self):
        assert wp_at("wp", "x := uniform(0, 2)", "[x = 0]", state()) == ExtQ(Fraction(1, 3))
        assert wp_at("wp", "x := uniform(1, 1)", "x |-> -", state(a1=0)) == 1

    def test_empty_uniform_range(self):
        with pytest.raises(UniformRangeError):
            wp_at("wp", "x := uniform(2, 0)", "1", state())

    def test_allocation_nondeterminism(self):
        assert wp_at("wp", "x := new(0)", "[x = 1]", state()) == 0
        assert wp_at("awp", "x := new(0)", "[x = 1]", state()) == 1
        assert wp_at("wp", "x := new(0)", "x |-> 0 ** 2 |-> 1", state(a2=1)) == 1

    def test_address_space_exhausted(self):
        with pytest.raises(AddressSpaceExhausted):
            wp_at("wp", "x := new(0)", "1", state(a1=0, a2=0))

    def test_sink_policy_flags_lower_bound(self):
        full = state(a1=0, a2=0)
        result = transform(
            WP, parse_program("x := new(0)"), parse_expectation("1"), CFG, 2,
            exhaustion=ExhaustionPolicy.SINK, states=[full, state()],
        )
        assert result[full] == 0
        assert result[state()] == 1
        assert result.lower_bound

    def test_post_variables_must_be_in_domain(self):
        with pytest.raises(InputError):
            wp_at("wp", "skip", "[z = 0]", state())


class TestLoops:
    """Test loop fixpoints in total and liberal modes."""

    def test_divergence(self):
        assert wp_at("wp", "while (true) { skip }", "1", state()) == 0
        assert wp_at("wlp", "while (true) { skip }", "1", state()) == 1

    def test_terminating_loop_is_exact(self):
        result = transform(WP, parse_program("while (x < 2) { x := x + 1 }"), parse_expectation("[x = 2]"), CFG, 0)
        assert all(v == 1 for _, v in result.items())
        assert result.status is FixpointStatus.EXACT

    def test_geometric_loop_stops_on_tolerance(self):
        c = parse_program("while (x = 0) { { x := 1 } [1/2] { skip } }")
        result = transform(WP, c, parse_expectation("1"), CFG, 0)
        start = state()
        assert result.status is FixpointStatus.APPROXIMATE
        assert result.direction == "below"
        assert result[start] < ONE
        assert not ExtQ(2 * CFG.loop_tolerance) < ONE.distance(result[start])

    def test_liberal_loop_approximates_from_above(self):
        c = parse_program("while (x = 0) { { x := 1 } [1/2] { skip } }")
        result = transform(WLP, c, parse_expectation("0"), CFG, 0)
        assert result.direction == "above"
        assert ZERO < result[state()]
        assert not ExtQ(2 * CFG.loop_tolerance) < result[state()]

    def test_loop_fixpoint_matches_while_transform(self):
        result = loop_fixpoint(WP, parse_guard("x < 2"), parse_program("x := x + 1"), parse_expectation("x"), CFG, 0)
        assert result[state()] == 2
        assert result.status is FixpointStatus.EXACT


class TestInvariants:
    """Test the upper and lower invariant rules."""

    guard = parse_guard("x = 0")
    body = parse_program("{ x := 1 } [1/2] { skip }")

    def test_upper_invariant_holds(self):
        result = check_invariant(
            InvariantDirection.UPPER, self.guard, self.body, parse_expectation("1"),
            parse_expectation("1"), CFG, 1,
        )
        assert result.holds

    def test_upper_invariant_counterexample(self):
        result = check_invariant(
            InvariantDirection.UPPER, self.guard, self.body, parse_expectation("1"),
            parse_expectation("[x = 1]"), CFG, 1,
        )
        assert result.verdict is Verdict.COUNTEREXAMPLE
        assert result.state.stack["x"] == 0
        assert result.lhs == ExtQ(Fraction(1, 2))
        assert result.rhs == 0

    def test_lower_invariant(self):
        result = check_invariant(
            InvariantDirection.LOWER, self.guard, self.body, parse_expectation("1"),
            parse_expectation("1"), CFG, 1,
        )
        assert result.holds

    def test_lower_invariant_needs_liberal_mode(self):
        with pytest.raises(InputError):
            check_invariant(
                InvariantDirection.LOWER, self.guard, self.body, parse_expectation("1"),
                parse_expectation("1"), CFG, 1, mode=WP,
            )


class TestFrame:
    """Test the frame rule and its converse."""

    def test_frame_rule_holds(self):
        result = check_frame(parse_program("free(x)"), parse_expectation("[emp]"), parse_expectation("size"), CFG, 2)
        assert result.verdict is Verdict.HOLDS

    def test_frame_rule_for_liberal_mode(self):
        result = check_frame(
            parse_program("free(x)"), parse_expectation("[emp]"), parse_expectation("[x = 1]"), CFG, 2, mode=WLP,
        )
        assert result.verdict is Verdict.HOLDS

    def test_converse_fails(self):
        result = check_frame(
            parse_program("<x> := 0"), parse_expectation("[emp]"), parse_expectation("x ~> 0"), CFG, 2,
            direction=FrameDirection.SUPER,
        )
        assert result.verdict is Verdict.COUNTEREXAMPLE
        assert result.lhs == 1 and result.rhs == 0

    def test_side_condition(self):
        result = check_frame(parse_program("x := 1"), parse_expectation("1"), parse_expectation("[x = 0]"), CFG, 1)
        assert result.verdict is Verdict.SIDE_CONDITION_VIOLATED
        assert "x" in result.note


class TestDuality:
    """Test the four dual pairs."""

    def test_loop_free_pairs_are_exact(self):
        c = parse_program("x := new(0); y := <x>; if (y = 0) { free(x) } else { skip }")
        entries = check_duality(c, parse_expectation("[emp] * [x = 1]"), CFG, 1)
        assert [e.name for e in entries] == ["wp_awlep", "wlp_awep", "wep_awlp", "wlep_awp"]
        for entry in entries:
            assert entry.exact
            assert entry.result.holds, entry.name
            assert entry.residual == 0

    def test_loops_agree_within_tolerance(self):
        c = parse_program("while (x = 0) { { x := 1 } [1/2] { skip } }")
        entries = check_duality(c, parse_expectation("[x = 1]"), CFG, 0)
        for entry in entries:
            assert not entry.exact
            assert entry.result.holds, entry.name


class TestLiteralHeapRules:
    """Test that the ⋆/−⋆ forms of the heap rules match the direct ones."""

    @pytest.mark.parametrize("mode, text", [
        (WP, "[y = 1] + size"),
        (WLP, "1/2 * [y = 1] + 1/2 * [emp]"),
        (WEP, "1/2 * [y = 1] + 1/2 * [emp]"),
    ])
    def test_literal_rules_agree(self, mode, text):
        c = parse_program("y := <x>; <x> := 1; free(x)")
        post = parse_expectation(text)
        fast = transform(mode, c, post, CFG, 2)
        literal = transform(mode, c, post, CFG, 2, literal_heap_rules=True)
        assert fast.table == literal.table

    def test_literal_allocation_agrees(self):
        c = parse_program("x := new(1)")
        post = parse_expectation("x |-> 1 + [x = 2]")
        fast = transform(WP, c, post, CFG, 1)
        literal = transform(WP, c, post, CFG, 1, literal_heap_rules=True)
        assert fast.table == literal.table



class TestOneBoundedPosts:
    """Test that liberal and extrinsic modes reject posts above 1."""

    @pytest.mark.parametrize("literal", [False, True])
    def test_extrinsic_heap_rules_reject(self, literal):
        with pytest.raises(OperandRangeError):
            wp_at("wep", "free(x)", "size + 1", state(x=1, a1=0, a2=0), literal_heap_rules=literal)

    def test_extrinsic_fault_value_is_unchanged(self):
        assert wp_at("wep", "free(x)", "1/2 * [emp]", state(x=2, a1=0)) == 1

    def test_liberal_loop_rejects_unreached_post(self):
        with pytest.raises(OperandRangeError):
            transform(WLP, parse_program("while (true) { skip }"), parse_expectation("size"), CFG, 2)

    def test_total_modes_accept_unbounded_posts(self):
        assert wp_at("wp", "free(x)", "size + 1", state(x=1, a1=0, a2=0)) == 2

    def test_lower_invariant_must_be_bounded(self):
        with pytest.raises(OperandRangeError):
            check_invariant(
                InvariantDirection.LOWER, parse_guard("x = 0"), parse_program("x := 1"), parse_expectation("1"),
                parse_expectation("2"), CFG, 0, mode=WLP,
            )

class TestConservativity:
    """Test agreement of wp with operational SL triples."""

    def test_valid_triple(self):
        result = check_conservativity(
            parse_program("free(x)"), parse_sl_formula("x |-> 0"), parse_sl_formula("emp"), CFG, 2,
        )
        assert result.verdict is Verdict.AGREE
        assert result.qsl_valid and result.operational_valid
        assert result.zero_one_valued

    def test_invalid_triple(self):
        result = check_conservativity(
            parse_program("free(x)"), parse_sl_formula("emp"), parse_sl_formula("emp"), CFG, 2,
        )
        assert result.verdict is Verdict.AGREE
        assert not result.qsl_valid and not result.operational_valid
        assert result.state is not None

    def test_probabilistic_program_rejected(self):
        with pytest.raises(InputError):
            check_conservativity(
                parse_program("{ skip } [1/2] { free(x) }"), parse_sl_formula("emp"), parse_sl_formula("emp"), CFG, 1,
            )


class TestTabulation:
    """Test SemExpectation over explicit and enumerated states."""

    def test_covers_enumerated_states(self):
        result = transform(WP, parse_program("skip"), parse_expectation("size"), CFG, 1)
        assert len(result) == len(enumerate_states(CFG, 1))

    def test_lookup_outside_table_is_computed(self):
        result = transform(WP, parse_program("skip"), parse_expectation("size"), CFG, 0)
        assert result[state(a1=0, a2=0)] == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
