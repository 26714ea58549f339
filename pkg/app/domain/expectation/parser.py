"""Parser for QSL expectations and separation-logic formulas."""

from fractions import Fraction
from functools import lru_cache

import lark

from app.domain.syntax.grammar import ARITH_GUARD_RULES, TERMINALS
from app.domain.syntax.parser import ExprBuilder, run_parser
from app.models.errors import ParseError

from .ast import (
    Expectation, SLFormula,
    EConst, Iverson, Emp, PointsTo, ValidPointer, Contains, ContainsAny, Size,
    ListSegment, ListLength, Tree, Path,
    Add, Mul, Monus, Max, Min, BigSum, BigSep, Sup, Inf, OneMinus, Power,
    SepCon, SepImp, ErrSepCon, ErrSepImp,
    SLPure, SLEmp, SLPointsTo, SLAnd, SLNot, SLExists, SLStar, SLWand,
)
from app.domain.syntax.ast import TRUE, FALSE
from .values import ExtQ

EXPECTATION_RULES = r"""
?expectation: e_wand

?e_wand: e_sum
       | e_sum "-*" e_wand                 -> e_sepimp
       | e_sum "-@" e_wand                 -> e_errsepimp
?e_sum: e_monus
      | e_sum "+" e_monus                  -> e_add
?e_monus: e_star
        | e_monus ".-" e_star              -> e_monus_op
?e_star: e_prod
       | e_star "**" e_prod                -> e_sepcon
       | e_star "@*" e_prod                -> e_errsepcon
?e_prod: e_unary
       | e_prod "*" e_unary                -> e_mul
?e_unary: e_atom
        | "sup" NAME "." e_unary           -> e_sup
        | "inf" NAME "." e_unary           -> e_inf
        | RATIONAL "-" e_unary             -> e_one_minus
?e_atom: RATIONAL                          -> e_const
       | "inf"                             -> e_infinity
       | "[" "emp" "]"                     -> e_emp
       | "[" guard "]"                     -> e_iverson
       | p_arg "|->" p_arg ("," p_arg)*    -> e_points_to
       | p_arg "|->" "-"                   -> e_valid
       | p_arg "~>" p_arg                  -> e_contains
       | p_arg "~>" "-"                    -> e_contains_any
       | "size"                            -> e_size
       | "ls" "(" arith "," arith ")"      -> e_ls
       | "len" "(" arith "," arith ")"     -> e_len
       | "tree" "(" arith ")"              -> e_tree
       | "path" "(" INT "," arith ")"      -> e_path
       | "tree_height" "(" arith ")"       -> e_tree_height
       | "max" "(" expectation "," expectation ")"     -> e_max
       | "min" "(" expectation "," expectation ")"     -> e_min
       | "sum" "(" expectation (";" expectation)* ")"  -> e_bigsum
       | "sep" "(" expectation (";" expectation)* ")"  -> e_bigsep
       | "pow" "(" RATIONAL "," expectation ")"        -> e_pow
       | "(" expectation ")"

?p_arg: INT                                -> int_lit
      | "-" INT                            -> neg_int
      | NAME                               -> var
      | "(" arith ")"

RATIONAL: /[0-9]+(\/[0-9]+|\.[0-9]+)?/
"""

SL_RULES = r"""
?sl_formula: sl_wand
?sl_wand: sl_star
        | sl_star "-*" sl_wand             -> sl_sepimp
?sl_star: sl_and
        | sl_star "**" sl_and              -> sl_sepcon
?sl_and: sl_not
       | sl_and "&" sl_not                 -> sl_and_op
?sl_not: "~" sl_not                        -> sl_neg
       | "exists" NAME "." sl_not          -> sl_exists
       | sl_atom
?sl_atom: "emp"                            -> sl_emp
        | "true"                           -> sl_true
        | "false"                          -> sl_false
        | "[" guard "]"                    -> sl_pure
        | p_arg "|->" p_arg ("," p_arg)*   -> sl_points_to
        | "(" sl_formula ")"
"""

EXPECTATION_GRAMMAR = EXPECTATION_RULES + SL_RULES + ARITH_GUARD_RULES + TERMINALS


def _rational(token) -> Fraction:
    text = str(token)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"rational literal {text} has a zero denominator") from None


class ExpectationBuilder(ExprBuilder):
    """Builds Expectation and SLFormula nodes."""

    # ── expectations ──────────────────────────────────────────────────────────

    def e_const(self, args):
        return EConst(ExtQ(_rational(args[0])))

    def e_infinity(self, _):
        return EConst(ExtQ.infinity())

    def e_emp(self, _):
        return Emp()

    def e_iverson(self, args):
        return Iverson(args[0])

    def e_points_to(self, args):
        return PointsTo(args[0], tuple(args[1:]))

    def e_valid(self, args):
        return ValidPointer(args[0])

    def e_contains(self, args):
        return Contains(args[0], args[1])

    def e_contains_any(self, args):
        return ContainsAny(args[0])

    def e_size(self, _):
        return Size()

    def e_ls(self, args):
        return ListSegment(args[0], args[1])

    def e_len(self, args):
        return ListLength(args[0], args[1])

    def e_tree(self, args):
        return Tree(args[0])

    def e_path(self, args):
        k = int(args[0])
        if k < 1:
            raise ParseError(f"path record size must be at least 1, got {k}")
        return Path(k, args[1])

    def e_tree_height(self, args):
        return Mul(Tree(args[0]), Path(2, args[0]))

    def e_max(self, args):
        return Max(args[0], args[1])

    def e_min(self, args):
        return Min(args[0], args[1])

    def e_bigsum(self, args):
        return BigSum(tuple(args))

    def e_bigsep(self, args):
        return BigSep(tuple(args))

    def e_pow(self, args):
        base = _rational(args[0])
        if not 0 <= base <= 1:
            raise ParseError(f"pow base {base} lies outside [0, 1]")
        return Power(base, args[1])

    def e_add(self, args):
        return Add(args[0], args[1])

    def e_mul(self, args):
        return Mul(args[0], args[1])

    def e_monus_op(self, args):
        return Monus(args[0], args[1])

    def e_sepcon(self, args):
        return SepCon(args[0], args[1])

    def e_errsepcon(self, args):
        return ErrSepCon(args[0], args[1])

    def e_sepimp(self, args):
        return SepImp(args[0], args[1])

    def e_errsepimp(self, args):
        return ErrSepImp(args[0], args[1])

    def e_sup(self, args):
        return Sup(str(args[0]), args[1])

    def e_inf(self, args):
        return Inf(str(args[0]), args[1])

    def e_one_minus(self, args):
        if _rational(args[0]) != 1:
            raise ParseError(f"only '1 - E' is supported, got '{args[0]} - E'")
        return OneMinus(args[1])

    # ── separation logic ──────────────────────────────────────────────────────

    def sl_emp(self, _):
        return SLEmp()

    def sl_true(self, _):
        return SLPure(TRUE)

    def sl_false(self, _):
        return SLPure(FALSE)

    def sl_pure(self, args):
        return SLPure(args[0])

    def sl_points_to(self, args):
        return SLPointsTo(args[0], tuple(args[1:]))

    def sl_and_op(self, args):
        return SLAnd(args[0], args[1])

    def sl_neg(self, args):
        return SLNot(args[0])

    def sl_exists(self, args):
        return SLExists(str(args[0]), args[1])

    def sl_sepcon(self, args):
        return SLStar(args[0], args[1])

    def sl_sepimp(self, args):
        return SLWand(args[0], args[1])


@lru_cache(maxsize=1)
def _parser() -> lark.Lark:
    return lark.Lark(EXPECTATION_GRAMMAR, start=["expectation", "sl_formula"], parser="earley")


@lru_cache(maxsize=4096)
def parse_expectation(text: str) -> Expectation:
    return run_parser(_parser(), ExpectationBuilder(), text, "expectation")


@lru_cache(maxsize=4096)
def parse_sl_formula(text: str) -> SLFormula:
    return run_parser(_parser(), ExpectationBuilder(), text, "sl_formula")
