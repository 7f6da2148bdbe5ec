"""Gaussian rationals: exact elements of Q(i)."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        m = _RAT_RE.match(value)
        if not m:
            raise ValueError(f"not a rational literal: {value!r}")
        return Fraction(int(m.group(1)), int(m.group(2) or 1))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class GaussRat:
    """An element ``re + im*i`` with ``re``, ``im`` arbitrary-precision rationals.

    Instances are immutable and hash like the equal int/Fraction when real.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "im", _frac(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRat is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussRat":
        if isinstance(value, GaussRat):
            return value
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        return cls(value)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussRat":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRat._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRat._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.im and not o.im:
            return GaussRat._raw(self.re * o.re, self.im)
        return GaussRat._raw(self.re * o.re - self.im * o.im,
                             self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussRat._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussRat":
        return GaussRat._raw(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussRat":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("GaussRat division by zero")
        return GaussRat._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = GaussRat.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = GaussRat._raw(Fraction(1), Fraction(0)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return not self.im and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # text -------------------------------------------------------------
    def __str__(self):
        if not self.im:
            return _rat_str(self.re)
        im = _rat_str(self.im) + "*I" if abs(self.im) != 1 else ("I" if self.im > 0 else "-I")
        if not self.re:
            return im
        sign = "+" if self.im > 0 else "-"
        im_abs = im.lstrip("-")
        return f"{_rat_str(self.re)}{sign}{im_abs}"

    def __repr__(self):
        return f"GaussRat({self.re!s}, {self.im!s})"

    def to_pair(self) -> list[str]:
        return [str(self.re), str(self.im)]

    @classmethod
    def from_pair(cls, pair) -> "GaussRat":
        re_, im_ = pair
        return cls(_frac(re_), _frac(im_))


def _rat_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


I = GaussRat(0, 1)
