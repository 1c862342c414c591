"""Exact scalars and vectors.

Rationals are :class:`fractions.Fraction`, which is always stored in lowest
terms with a positive denominator. Vectors are plain tuples of Fractions.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Tuple

from ..errors import InstanceError

Rational = Fraction
QVector = Tuple[Fraction, ...]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def to_rational(value) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would silently smuggle binary rounding into
    exact data.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if not match:
            raise ValueError(f"not a rational: {value!r}")
        num, den = match.group(1), match.group(2)
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator: {value!r}")
        return Fraction(int(num), int(den) if den is not None else 1)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def parse_rational(value, where: str) -> Fraction:
    """Like :func:`to_rational` but raises :class:`InstanceError` tagged with ``where``."""
    try:
        return to_rational(value)
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"{where}: {exc}") from None


def format_rational(q: Fraction) -> str:
    return str(q)


def qvec(values: Iterable) -> QVector:
    return tuple(to_rational(v) for v in values)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def lcm_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        d = v.denominator
        out = out * d // gcd(out, d)
    return out


def primitive(v: Sequence[int]) -> Tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for a in v:
        g = gcd(g, a)
    if g > 1:
        return tuple(a // g for a in v)
    return tuple(v)


def integer_row(v: Sequence[Fraction]) -> Tuple[int, ...]:
    """Positive rescaling of a rational vector to a primitive integer vector."""
    scale = lcm_denominators(v)
    return primitive([int(a * scale) for a in v])


def unit(n: int, j: int) -> QVector:
    return tuple(Fraction(1 if i == j else 0) for i in range(n))


def zeros(n: int) -> QVector:
    return (Fraction(0),) * n
