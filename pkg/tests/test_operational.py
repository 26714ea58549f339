"""Tests for the operational semantics and the expected-reward oracle."""

from fractions import Fraction

import pytest

from app.domain.expectation import ONE, ExtQ, parse_expectation, parse_sl_formula
from app.domain.operational import (
    Configuration, build_fragment, check_triple, expected_reward, export_fragment, sample_run,
    soundness_check, step,
)
from app.domain.state import Heap, ProgState, Stack
from app.domain.syntax import parse_program
from app.models.enums import AllocPolicy, ExhaustionPolicy, FixpointStatus, OptimizationDirection
from app.models.errors import AddressSpaceExhausted, FragmentTooLarge, InputError, IterationBudgetExhausted
from app.models.schemas import DomainConfig

CFG = DomainConfig(vars=("x", "y"), vmin=0, vmax=2, addr_count=2)
GEOMETRIC = "while (x = 0) { { x := 1 } [1/2] { skip } }"


def state(x: int = 0, y: int = 0, cells: dict[int, int] | None = None) -> ProgState:
    return ProgState(Stack({"x": x, "y": y}), Heap(cells or {}))


def reward(direction: OptimizationDirection, program: str, post: str, at: ProgState, **options):
    return expected_reward(direction, parse_program(program), parse_expectation(post), [at], CFG, **options)


class TestStep:
    """Test the small-step execution relation."""

    def test_skip_terminates(self):
        (t,) = step(Configuration(parse_program("skip"), state()), CFG)
        assert t.prob == 1
        assert t.target.terminated

    def test_final_configurations_have_no_successors(self):
        (t,) = step(Configuration(parse_program("skip"), state()), CFG)
        assert step(t.target, CFG) == ()

    def test_free_of_unallocated_address_faults(self):
        (t,) = step(Configuration(parse_program("free(x)"), state(x=1)), CFG)
        assert t.target.faulted

    def test_parallel_edges_are_merged(self):
        transitions = step(Configuration(parse_program("{ x := 1 } [1/3] { x := 1 }"), state()), CFG)
        assert len(transitions) == 1
        assert transitions[0].prob == 1

    def test_certain_choice_drops_zero_edge(self):
        transitions = step(Configuration(parse_program("{ x := 1 } [1] { x := 2 }"), state()), CFG)
        assert len(transitions) == 1

    def test_allocation_actions_are_base_addresses(self):
        transitions = step(Configuration(parse_program("x := new(0)"), state(cells={2: 0})), CFG)
        assert [t.action for t in transitions] == [1]
        assert transitions[0].target.state.heap == Heap({1: 0, 2: 0})

    def test_sequence_continues_after_first(self):
        (t,) = step(Configuration(parse_program("x := 1; y := 2"), state()), CFG)
        assert t.target.control == parse_program("y := 2")
        assert t.target.state.stack["x"] == 1


class TestOracle:
    """Test value iteration on reachable fragments."""

    def test_min_and_max_schedulers(self):
        assert reward(OptimizationDirection.MIN, "x := new(0)", "[x = 1]", state()).values[state()] == 0
        assert reward(OptimizationDirection.MAX, "x := new(0)", "[x = 1]", state()).values[state()] == 1

    def test_probabilistic_reward(self):
        result = reward(OptimizationDirection.MIN, "x := uniform(0, 2)", "[x = 2] + 2 * [x = 1]", state())
        assert result.values[state()] == ONE
        assert result.status is FixpointStatus.EXACT

    def test_faults_contribute_zero(self):
        assert reward(OptimizationDirection.MAX, "free(x)", "1", state(x=1)).values[state(x=1)] == 0

    def test_geometric_loop_converges_from_below(self):
        result = reward(OptimizationDirection.MIN, GEOMETRIC, "1", state())
        value = result.values[state()]
        assert result.status is FixpointStatus.APPROXIMATE
        assert value < ONE
        assert ExtQ(Fraction(99, 100)) < value

    def test_iteration_budget(self):
        with pytest.raises(IterationBudgetExhausted):
            reward(OptimizationDirection.MIN, GEOMETRIC, "1", state(), max_iters=3)

    def test_fragment_cap(self):
        with pytest.raises(FragmentTooLarge):
            reward(OptimizationDirection.MIN, "x := 1; x := 2; x := 0", "1", state(), cap=2)

    def test_exhaustion_raises_by_default(self):
        full = state(cells={1: 0, 2: 0})
        with pytest.raises(AddressSpaceExhausted):
            reward(OptimizationDirection.MIN, "x := new(0)", "1", full)

    def test_sink_policy(self):
        full = state(cells={1: 0, 2: 0})
        result = reward(OptimizationDirection.MIN, "x := new(0)", "1", full, exhaustion=ExhaustionPolicy.SINK)
        assert result.values[full] == 0
        assert result.lower_bound

    def test_lowest_address_policy(self):
        result = reward(
            OptimizationDirection.MIN, "x := new(0)", "[x = 1]", state(), alloc_policy=AllocPolicy.LOWEST,
        )
        assert result.values[state()] == 1

    def test_seeded_random_policy_rejected(self):
        with pytest.raises(InputError):
            reward(
                OptimizationDirection.MIN, "x := new(0)", "1", state(), alloc_policy=AllocPolicy.SEEDED_RANDOM,
            )

    def test_export(self):
        c = parse_program("{ x := 1 } [1/2] { free(x) }")
        fragment = build_fragment(c, [state()], CFG)
        dump = export_fragment(fragment)
        assert dump["inits"] == {"x=0,y=0; heap=": 0}
        controls = [entry["control"] for entry in dump["configurations"]]
        assert "TERMINATED" in controls and "FAULT" in controls
        assert {t["prob"] for t in dump["configurations"][0]["transitions"]} == {"1/2"}


class TestSoundness:
    """Test wp against the oracle over every enumerated state."""

    def test_loop_free_program_is_exact(self):
        c = parse_program("y := <x>; { <x> := 0 } [1/2] { free(x) }")
        report = soundness_check(c, parse_expectation("[emp] + [y = 1]"), CFG, 2)
        assert report.result.holds
        assert report.exact
        assert report.max_deviation == 0
        assert report.states == 9 * 16

    def test_allocation(self):
        c = parse_program("x := new(1); y := <x>")
        report = soundness_check(c, parse_expectation("x |-> 1 + y"), CFG, 1)
        assert report.result.holds and report.exact

    def test_loop_within_tolerance(self):
        report = soundness_check(parse_program(GEOMETRIC), parse_expectation("[x = 1]"), CFG, 1)
        assert report.result.holds
        assert not report.exact
        assert not ExtQ(2 * report.tolerance) < report.max_deviation


class TestTriples:
    """Test total-correctness SL triples on the reachable fragment."""

    def test_valid_triple(self):
        result = check_triple(parse_program("<x> := 1"), parse_sl_formula("x |-> 0"), parse_sl_formula("x |-> 1"), CFG, 2)
        assert result.valid

    def test_fault_invalidates(self):
        result = check_triple(parse_program("free(x)"), parse_sl_formula("emp"), parse_sl_formula("emp"), CFG, 2)
        assert not result.valid
        assert result.reason

    def test_divergence_invalidates(self):
        result = check_triple(
            parse_program("while (true) { skip }"), parse_sl_formula("emp"), parse_sl_formula("true"), CFG, 0,
        )
        assert not result.valid


class TestSampling:
    """Test Monte-Carlo runs under fixed allocation policies."""

    def test_fair_coin(self):
        c = parse_program("{ x := 1 } [1/2] { x := 2 }")
        result = sample_run(c, state(), parse_expectation("[x = 1]"), CFG, n_samples=2000, seed=7)
        assert abs(result.mean - 0.5) < 0.05

    def test_reproducible(self):
        c = parse_program("x := uniform(0, 2)")
        f = parse_expectation("x")
        first = sample_run(c, state(), f, CFG, n_samples=200, seed=3)
        second = sample_run(c, state(), f, CFG, n_samples=200, seed=3)
        assert first.mean == second.mean

    def test_faults_counted(self):
        result = sample_run(parse_program("free(x)"), state(x=1), parse_expectation("1"), CFG, n_samples=10)
        assert result.faults == 10
        assert result.mean == 0.0

    def test_timeouts_counted(self):
        result = sample_run(
            parse_program("while (true) { skip }"), state(), parse_expectation("1"), CFG, n_samples=5, max_steps=50,
        )
        assert result.timeouts == 5

    def test_highest_policy(self):
        result = sample_run(
            parse_program("x := new(0)"), state(), parse_expectation("[x = 2]"), CFG,
            alloc_policy=AllocPolicy.HIGHEST, n_samples=5,
        )
        assert result.mean == 1.0


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
