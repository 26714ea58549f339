"""ExtQ: exact nonnegative rationals extended with ∞."""

from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Optional, Union

from app.models.errors import InputError

Number = Union[int, Fraction, "ExtQ"]


@total_ordering
class ExtQ:
    """An element of ℚ≥0 ∪ {∞}.

    Conventions: a + ∞ = ∞, a·∞ = ∞ for a > 0, 0·∞ = 0, and monus
    a ⊖ b = max(a − b, 0) with ∞ ⊖ b = ∞ for finite b and a ⊖ ∞ = 0.
    """

    __slots__ = ("_q",)  # None encodes ∞

    def __init__(self, value: Union[int, Fraction, str, "ExtQ", None] = 0):
        if isinstance(value, ExtQ):
            self._q = value._q
            return
        if value is None:
            self._q = None
            return
        if isinstance(value, str):
            text = value.strip()
            if text in ("inf", "∞"):
                self._q = None
                return
            value = Fraction(text)
        q = Fraction(value)
        if q < 0:
            raise InputError(f"expectation values are nonnegative, got {q}")
        self._q = q

    @classmethod
    def infinity(cls) -> "ExtQ":
        return cls(None)

    @classmethod
    def of(cls, value: Number) -> "ExtQ":
        return value if isinstance(value, ExtQ) else cls(value)

    @property
    def is_infinite(self) -> bool:
        return self._q is None

    @property
    def fraction(self) -> Fraction:
        if self._q is None:
            raise ValueError("∞ has no rational value")
        return self._q

    def is_zero(self) -> bool:
        return self._q == 0

    def __bool__(self) -> bool:
        return self._q != 0

    # ── arithmetic ───────────────────────────────────────────────────────────

    def __add__(self, other: Number) -> "ExtQ":
        other = ExtQ.of(other)
        if self._q is None or other._q is None:
            return INF
        return ExtQ(self._q + other._q)

    __radd__ = __add__

    def __mul__(self, other: Number) -> "ExtQ":
        other = ExtQ.of(other)
        if self._q == 0 or other._q == 0:
            return ZERO
        if self._q is None or other._q is None:
            return INF
        return ExtQ(self._q * other._q)

    __rmul__ = __mul__

    def monus(self, other: Number) -> "ExtQ":
        other = ExtQ.of(other)
        if other._q is None:
            return ZERO
        if self._q is None:
            return INF
        return ExtQ(max(self._q - other._q, 0))

    def distance(self, other: "ExtQ") -> "ExtQ":
        """|a − b| with |∞ − ∞| = 0."""
        if self._q is None and other._q is None:
            return ZERO
        if self._q is None or other._q is None:
            return INF
        return ExtQ(abs(self._q - other._q))

    def one_minus(self) -> "ExtQ":
        """1 − a for a ≤ 1."""
        if self._q is None or self._q > 1:
            raise ValueError(f"1 - {self} is undefined on nonnegative values")
        return ExtQ(1 - self._q)

    def __pow__(self, exponent: int) -> "ExtQ":
        if self._q is None:
            return ONE if exponent == 0 else INF
        return ExtQ(self._q ** exponent)

    # ── order ────────────────────────────────────────────────────────────────

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._q is not None and self._q == other
        if not isinstance(other, ExtQ):
            return NotImplemented
        return self._q == other._q

    def __lt__(self, other: Number) -> bool:
        other = ExtQ.of(other)
        if self._q is None:
            return False
        if other._q is None:
            return True
        return self._q < other._q

    def __hash__(self) -> int:
        return hash(float("inf")) if self._q is None else hash(self._q)

    def __repr__(self) -> str:
        return f"ExtQ({self})"

    def __str__(self) -> str:
        if self._q is None:
            return "inf"
        if self._q.denominator == 1:
            return str(self._q.numerator)
        return f"{self._q.numerator}/{self._q.denominator}"

    def __float__(self) -> float:
        return float("inf") if self._q is None else float(self._q)


ZERO = ExtQ(0)
ONE = ExtQ(1)
INF = ExtQ.infinity()


def ext_max(values: Iterable[ExtQ], empty: ExtQ = ZERO) -> ExtQ:
    best: Optional[ExtQ] = None
    for v in values:
        if best is None or best < v:
            best = v
            if best.is_infinite:
                break
    return empty if best is None else best


def ext_min(values: Iterable[ExtQ], empty: ExtQ = INF) -> ExtQ:
    best: Optional[ExtQ] = None
    for v in values:
        if best is None or v < best:
            best = v
            if best.is_zero():
                break
    return empty if best is None else best
