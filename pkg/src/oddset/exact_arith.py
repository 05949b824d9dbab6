"""Exact rational scalars and the number-theoretic predicates built on them.

The scalar type is :class:`fractions.Fraction`, which already keeps every value
in lowest terms with a positive denominator.  This module adds the text
grammar used by every file format, a parity/dyadic classifier, the odd-part
lcm used for dyadic rescaling, and a minimum-denominator rational chooser.
"""

from __future__ import annotations

import math
import re
from enum import Enum
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"-?\d+(/\d+)?")


class RationalClass(str, Enum):
    ODD_INTEGER = "odd-integer"
    EVEN_INTEGER = "even-integer"
    STRICT_HALF_INTEGER = "strict-half-integer"
    DYADIC_NON_HALF = "dyadic-non-half"
    NON_DYADIC = "non-dyadic"


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and strings to a Fraction.

    Strings may use the canonical ``-p/q`` grammar or a finite decimal such as
    ``"1.41421356"``; both parse exactly.  Floats are rejected because their
    binary value is rarely what the caller meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if _RATIONAL_RE.fullmatch(text):
            return parse_rational(text)
        try:
            return Fraction(text)
        except ValueError:
            raise ValueError(f"not a rational or decimal literal: {value!r}") from None
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``[-]digits[/digits]``; the denominator must be positive."""
    text = text.strip()
    if not _RATIONAL_RE.fullmatch(text):
        raise ValueError(f"malformed rational {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rational_core(lhs: Fraction, rhs: Fraction | None, op: str):
    """Dispatch one exact operation by name.

    ``compare`` returns -1, 0 or 1; ``abs`` ignores ``rhs``.  Division by zero
    raises :class:`ZeroDivisionError`.
    """
    lhs = as_rational(lhs)
    if op == "abs":
        return abs(lhs)
    rhs = as_rational(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        if rhs == 0:
            raise ZeroDivisionError(f"division of {format_rational(lhs)} by zero")
        return lhs / rhs
    if op == "compare":
        return (lhs > rhs) - (lhs < rhs)
    raise ValueError(f"unknown operation {op!r}")


def is_power_of_two(k: int) -> bool:
    return k > 0 and k & (k - 1) == 0


def odd_part(k: int) -> int:
    """Largest odd divisor of a positive integer (strips factors of two)."""
    if k <= 0:
        raise ValueError("odd part is defined for positive integers only")
    return k >> ((k & -k).bit_length() - 1)


def classify_rational(x: Fraction) -> RationalClass:
    x = as_rational(x)
    den = x.denominator
    if den == 1:
        return RationalClass.ODD_INTEGER if x.numerator % 2 else RationalClass.EVEN_INTEGER
    if den == 2:
        return RationalClass.STRICT_HALF_INTEGER
    if is_power_of_two(den):
        return RationalClass.DYADIC_NON_HALF
    return RationalClass.NON_DYADIC


def is_half_integer(x: Fraction) -> bool:
    """True for every element of the half-integer lattice, integers included."""
    return x.denominator <= 2


def is_odd_integer(x: Fraction) -> bool:
    return x.denominator == 1 and x.numerator % 2 == 1


def odd_denominator_lcm(xs: Iterable[Fraction]) -> int:
    """lcm of the odd parts of all denominators in ``xs``.

    Multiplying every element by the result leaves only power-of-two
    denominators.
    """
    result = None
    for x in xs:
        part = odd_part(as_rational(x).denominator)
        result = part if result is None else math.lcm(result, part)
    if result is None:
        raise ValueError("odd_denominator_lcm needs at least one value")
    return result


def best_rational_in_interval(lo: Fraction, hi: Fraction) -> Fraction:
    """Simplest rational strictly inside the open interval ``(lo, hi)``.

    Simplest means minimum denominator, then minimum absolute numerator.  The
    search is a Stern-Brocot descent that takes each run of same-direction
    steps at once (one continued-fraction term per iteration), so it stays
    fast when the interval is tiny.
    """
    lo, hi = as_rational(lo), as_rational(hi)
    if lo >= hi:
        raise ValueError(
            f"empty interval: lo={format_rational(lo)} is not below hi={format_rational(hi)}"
        )
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -_simplest_positive(-hi, -lo)
    return _simplest_positive(lo, hi)


def _simplest_positive(lo: Fraction, hi: Fraction | None) -> Fraction:
    # 0 <= lo < hi; hi=None means +infinity.  Terms of the continued fraction
    # are collected left to right and folded at the end.
    terms: list[int] = []
    while True:
        whole = math.floor(lo)
        if hi is None or whole + 1 < hi:
            terms.append(whole + 1)
            break
        # both ends share the integer part; recurse on the reciprocal tails
        terms.append(whole)
        lo_tail, hi_tail = lo - whole, hi - whole
        lo, hi = 1 / hi_tail, (None if lo_tail == 0 else 1 / lo_tail)
    value = Fraction(terms[-1])
    for term in reversed(terms[:-1]):
        value = term + 1 / value
    return value
