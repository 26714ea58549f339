"""Tests for the hpGCL parser, printer and syntactic helpers."""

from fractions import Fraction

import pytest

from app.domain.syntax import (
    SKIP, Alloc, Assign, BinOp, Compare, Const, Free, Ite, Lookup, Mutate, Not, PChoice, Seq,
    Uniform, Var, While,
    compile_arith, compile_guard, count_allocs, eval_arith, eval_guard, is_alloc_free, is_loop_free,
    is_probabilistic, modified_vars, parse_arith, parse_guard, parse_program, program_vars, render_program,
    subprograms,
)
from app.models.errors import ParseError


class TestProgramParser:
    """Test concrete program syntax."""

    def test_atomic_statements(self):
        assert parse_program("skip") == SKIP
        assert parse_program("x := y + 1") == Assign("x", BinOp("+", Var("y"), Const(1)))
        assert parse_program("x := new(0, y)") == Alloc("x", (Const(0), Var("y")))
        assert parse_program("x := <y>") == Lookup("x", Var("y"))
        assert parse_program("<x + 1> := 3") == Mutate(BinOp("+", Var("x"), Const(1)), Const(3))
        assert parse_program("free(x)") == Free(Var("x"))
        assert parse_program("x := uniform(0, 2)") == Uniform("x", Const(0), Const(2))

    def test_sequence_is_right_nested(self):
        p = parse_program("x := 1; y := 2; free(x)")
        assert p == Seq(Assign("x", Const(1)), Seq(Assign("y", Const(2)), Free(Var("x"))))

    def test_trailing_semicolon_allowed(self):
        assert parse_program("x := 1;") == Assign("x", Const(1))

    def test_negative_literal(self):
        assert parse_program("x := -1") == Assign("x", Const(-1))

    def test_if_without_else_is_sugar(self):
        p = parse_program("if (x = 0) { free(y) }")
        assert p == Ite(Compare("=", Var("x"), Const(0)), Free(Var("y")), SKIP)

    def test_probabilistic_choice(self):
        p = parse_program("{ x := 1 } [1/3] { x := 2 }")
        assert isinstance(p, PChoice)
        assert p.prob == Fraction(1, 3)

    def test_decimal_probability(self):
        p = parse_program("{ skip } [0.25] { x := 1 }")
        assert p.prob == Fraction(1, 4)

    def test_probability_out_of_range(self):
        with pytest.raises(ParseError):
            parse_program("{ skip } [3/2] { skip }")

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_program("{ skip } [1/0] { skip }")

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as info:
            parse_program("x := ;")
        assert info.value.line == 1
        assert info.value.column is not None
        assert info.value.expected

    def test_comments_ignored(self):
        p = parse_program("# shuffle\nx := 1 # done\n")
        assert p == Assign("x", Const(1))


class TestGuards:
    """Test guard parsing and evaluation."""

    def test_greater_than_is_swapped(self):
        assert parse_guard("x > 1") == Compare("<", Const(1), Var("x"))
        assert parse_guard("x >= 1") == Compare("<=", Const(1), Var("x"))

    def test_negation(self):
        assert parse_guard("!(x = 0)") == Not(Compare("=", Var("x"), Const(0)))

    def test_evaluation(self):
        b = compile_guard(parse_guard("x != 0 && (y < 2 || !true)"))
        assert b({"x": 1, "y": 1}) is True
        assert b({"x": 0, "y": 1}) is False
        assert b({"x": 1, "y": 3}) is False

    def test_arith_evaluation(self):
        f = compile_arith(parse_arith("x * 2 - (y + -1)"))
        assert f({"x": 3, "y": 2}) == 5

    def test_direct_evaluation_entry_points(self):
        assert eval_arith(parse_arith("x - 5"), {"x": 1}) == -4
        assert eval_guard(parse_guard("x <= y"), {"x": 2, "y": 2}) is True


class TestPrinter:
    """Test that printing round-trips through the parser."""

    @pytest.mark.parametrize("source", [
        "x := new(0); <x> := y; y := <x>; free(x)",
        "{ x := 1; y := 2 }; free(x)",
        "if (x = 0 || !(y < 1)) { skip } else { x := x - (y - 1) }",
        "while (0 <= i && i < n) { j := uniform(i, n - 1); i := i + 1 }",
        "{ { free(x) } [1/2] { skip } } [1] { x := 2 * (y + 1) }",
    ])
    def test_round_trip(self, source):
        p = parse_program(source)
        assert parse_program(render_program(p)) == p

    def test_canonical_text(self):
        p = parse_program("if(x=0){free(x)}")
        assert render_program(p) == "if (x = 0) { free(x) } else { skip }"


class TestSyntacticHelpers:
    """Test variable sets and program classification."""

    def test_modified_and_program_vars(self):
        p = parse_program("x := new(y); z := <x>; <x> := w")
        assert modified_vars(p) == {"x", "z"}
        assert program_vars(p) == {"x", "y", "z", "w"}

    def test_mutation_modifies_no_variable(self):
        assert modified_vars(parse_program("<x> := 1; free(y)")) == frozenset()

    def test_classification(self):
        p = parse_program("while (x < 2) { { x := x + 1 } [1/2] { skip } }")
        assert not is_loop_free(p)
        assert is_probabilistic(p)
        assert is_alloc_free(p)
        assert count_allocs(parse_program("x := new(0); y := new(1, 2)")) == 2

    def test_subprograms_start_with_program(self):
        p = parse_program("while (x < 1) { x := 1 }")
        subs = list(subprograms(p))
        assert subs[0] == p
        assert any(isinstance(s, Assign) for s in subs)
        assert isinstance(subs[0], While)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
