"""Arbitrary-precision rationals.

gmpy2's ``mpq`` is used when importable; ``fractions.Fraction`` otherwise.
Both keep ``denominator > 0`` and a reduced representation.
"""
from fractions import Fraction

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    Rational = Fraction

ZERO = Rational(0)
ONE = Rational(1)


def as_rational(x):
    if isinstance(x, Rational):
        return x
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return Rational(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floating-point input is not supported")
    return Rational(x)


def rational_str(x):
    x = as_rational(x)
    n, d = int(x.numerator), int(x.denominator)
    return str(n) if d == 1 else f"{n}/{d}"


def parse_rational(s):
    return as_rational(Fraction(s))
