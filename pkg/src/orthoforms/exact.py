"""Exact scalars: rationals (``fractions.Fraction``) and complex rationals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Q = Fraction
Scalar = Union[int, Fraction, "CRational", complex]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(value, *, allow_float: bool = False) -> Fraction:
    """Coerce ``value`` to a Fraction without rounding.

    Strings must look like ``"p/q"``, ``"p"`` or a finite decimal.  Floats are
    rejected unless ``allow_float`` is set (then they convert exactly).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {value!r}") from exc
    if isinstance(value, float):
        if not allow_float:
            raise TypeError(f"float {value!r} given where an exact rational is required")
        if not math.isfinite(value):
            raise ValueError(f"non-finite float {value!r}")
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def rationalize(x: float, eps: float) -> Fraction:
    """Smallest-denominator continued-fraction convergent within ``eps`` of ``x``."""
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r}")
    if eps <= 0:
        return Fraction(x)
    target = Fraction(x)
    tol = Fraction(eps)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    rest = target
    while True:
        a = math.floor(rest)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        approx = Fraction(h1, k1)
        if abs(approx - target) <= tol or rest == a:
            return approx
        rest = 1 / (rest - a)


def fraction_str(q: Fraction) -> str:
    """Lowest-terms text form: ``"3"``, ``"-1/2"``."""
    return str(Fraction(q))


@dataclass(frozen=True, slots=True)
class CRational:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction = ZERO
    im: Fraction = ZERO

    def __post_init__(self):
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", to_fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", to_fraction(self.im))

    @classmethod
    def of(cls, value, *, allow_float: bool = False) -> "CRational":
        if isinstance(value, CRational):
            return value
        if isinstance(value, complex):
            if not allow_float:
                raise TypeError(f"complex float {value!r} given where an exact value is required")
            return cls(Fraction(value.real), Fraction(value.imag))
        if isinstance(value, (tuple, list)) and len(value) == 2:
            return cls(to_fraction(value[0], allow_float=allow_float),
                       to_fraction(value[1], allow_float=allow_float))
        return cls(to_fraction(value, allow_float=allow_float), ZERO)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return CRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return CRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return CRational(self.re * other, self.im * other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return CRational(self.re * other.re - self.im * other.im,
                         self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        d = other.norm2()
        if d == 0:
            raise ZeroDivisionError("division by complex zero")
        n = self * other.conj()
        return CRational(n.re / d, n.im / d)

    def __neg__(self):
        return CRational(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conj(self) -> "CRational":
        return CRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"CRational({self.re})"
        return f"CRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _coerce(x):
    if isinstance(x, CRational):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return CRational(Fraction(x), ZERO)
    return NotImplemented


CZERO = CRational(ZERO, ZERO)
CONE = CRational(ONE, ZERO)
I = CRational(ZERO, ONE)
