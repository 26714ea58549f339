"""Parser for hpGCL concrete syntax (lark, Earley)."""

from fractions import Fraction
from functools import lru_cache
from typing import Any

import lark
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from app.models.errors import ParseError

from .ast import (
    ArithExpr, GuardExpr, Program,
    Const, Var, BinOp, BoolConst, Compare, And, Or, Not,
    SKIP, Assign, Ite, While, PChoice, Alloc, Mutate, Lookup, Free, Uniform, seq,
)
from .grammar import PROGRAM_GRAMMAR


class ExprBuilder(lark.Transformer):
    """Builds arithmetic and guard nodes; shared by the program and expectation parsers."""

    def int_lit(self, args):
        return Const(int(args[0]))

    def neg_int(self, args):
        return Const(-int(args[0]))

    def var(self, args):
        return Var(str(args[0]))

    def add(self, args):
        return BinOp("+", args[0], args[1])

    def sub(self, args):
        return BinOp("-", args[0], args[1])

    def mul(self, args):
        return BinOp("*", args[0], args[1])

    def g_true(self, _):
        return BoolConst(True)

    def g_false(self, _):
        return BoolConst(False)

    def g_compare(self, args):
        left, op, right = args
        op = str(op)
        # > and >= are sugar for the swapped < and <=
        if op == ">":
            return Compare("<", right, left)
        if op == ">=":
            return Compare("<=", right, left)
        return Compare(op, left, right)

    def g_and(self, args):
        return And(args[0], args[1])

    def g_or(self, args):
        return Or(args[0], args[1])

    def g_not(self, args):
        return Not(args[0])


class ProgramBuilder(ExprBuilder):
    """Builds Program nodes from the parse tree."""

    def program(self, args):
        return seq(*args)

    def block(self, args):
        return args[0]

    def skip(self, _):
        return SKIP

    def assign(self, args):
        return Assign(str(args[0]), args[1])

    def alloc(self, args):
        return Alloc(str(args[0]), tuple(args[1:]))

    def lookup(self, args):
        return Lookup(str(args[0]), args[1])

    def uniform(self, args):
        return Uniform(str(args[0]), args[1], args[2])

    def mutate(self, args):
        return Mutate(args[0], args[1])

    def free(self, args):
        return Free(args[0])

    def ite(self, args):
        return Ite(args[0], args[1], args[2])

    def if_then(self, args):
        return Ite(args[0], args[1], SKIP)

    def while_loop(self, args):
        return While(args[0], args[1])

    def pchoice(self, args):
        left, prob, right = args
        return PChoice(left, prob, right)

    def prob_ratio(self, args):
        num, den = int(args[0]), int(args[1])
        if den == 0:
            raise ParseError(f"probability {num}/{den} has a zero denominator")
        return _check_probability(Fraction(num, den))

    def prob_decimal(self, args):
        return _check_probability(Fraction(str(args[0])))

    def prob_int(self, args):
        return _check_probability(Fraction(int(args[0])))


def _check_probability(p: Fraction) -> Fraction:
    if not 0 <= p <= 1:
        raise ParseError(f"probability {p} lies outside [0, 1]")
    return p


def run_parser(parser: lark.Lark, builder: lark.Transformer, text: str, start: str) -> Any:
    """Parse ``text`` from ``start`` and build it, mapping lark failures to ParseError."""
    try:
        tree = parser.parse(text, start=start)
    except UnexpectedInput as e:
        raise _to_parse_error(e, text) from None
    try:
        return builder.transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ParseError):
            raise e.orig_exc from None
        raise


def _to_parse_error(e: UnexpectedInput, text: str) -> ParseError:
    expected: set[str] = set()
    if isinstance(e, UnexpectedCharacters):
        expected = set(e.allowed or ())
    elif isinstance(e, (UnexpectedToken, UnexpectedEOF)):
        expected = set(e.expected or ())
    line = getattr(e, "line", None)
    column = getattr(e, "column", None)
    if line is None or line < 0:
        # end of input
        line = text.count("\n") + 1
        column = len(text.rsplit("\n", 1)[-1]) + 1
    return ParseError(f"syntax error at line {line}, column {column}", line=line, column=column, expected=list(expected))


@lru_cache(maxsize=1)
def _program_parser() -> lark.Lark:
    return lark.Lark(PROGRAM_GRAMMAR, start=["program", "guard", "arith"], parser="earley")


def parse_program(text: str) -> Program:
    """Parse hpGCL source into a Program."""
    return run_parser(_program_parser(), ProgramBuilder(), text, "program")


def parse_guard(text: str) -> GuardExpr:
    return run_parser(_program_parser(), ProgramBuilder(), text, "guard")


def parse_arith(text: str) -> ArithExpr:
    return run_parser(_program_parser(), ProgramBuilder(), text, "arith")
