"""
Rational scalar helpers.

All symbolic coefficients are ``fractions.Fraction`` values; they are always
kept in lowest terms with a positive denominator. Serialized form is the
decimal-free string ``"p/q"`` (or ``"p"`` for integers).
"""
import re
from fractions import Fraction
from math import isqrt
from typing import Tuple, Union

from src.errors import NegativeDiscriminant, ParseError

RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: symbols never carry floating-point coefficients.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational coefficients")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ParseError(f"not a decimal-free rational string: {value!r}")
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError as e:
            raise ParseError(f"zero denominator in {value!r}") from e
    raise TypeError(f"unsupported coefficient type {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Canonical string form of a rational."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_sqrt(value: Fraction, precision_bits: int = 64) -> Tuple[Fraction, bool]:
    """Square root of a non-negative rational.

    Returns ``(root, exact)``. When ``value`` is not a rational square the root
    is the floor of sqrt(value) on the grid 2^-precision_bits, so the true root
    lies in ``[root, root + 2**-precision_bits)``.

    Raises:
        NegativeDiscriminant: If ``value`` is negative
    """
    value = Fraction(value)
    if value < 0:
        raise NegativeDiscriminant(f"square root of negative rational {value}")
    p, q = value.numerator, value.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq), True
    scale = 1 << precision_bits
    return Fraction(isqrt(p * scale * scale // q), scale), False
