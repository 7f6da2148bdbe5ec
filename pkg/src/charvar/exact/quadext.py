"""Exact arithmetic in Q(sqrt(d)) for a rational non-square d.

Used to evaluate polynomials at roots of rational quadratics without
cancellation. Conversion to float picks the numerically stable formula
when the rational and irrational parts nearly cancel.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from .gaussrat import _frac, _rat_str


def _is_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


class QuadExt:
    """``a + b*sqrt(d)`` with rational ``a``, ``b`` and fixed radicand ``d``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=2):
        d = _frac(d)
        if _is_square(d):
            raise ValueError(f"radicand {d} is a rational square")
        object.__setattr__(self, "a", _frac(a))
        object.__setattr__(self, "b", _frac(b))
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    @classmethod
    def _raw(cls, a, b, d) -> "QuadExt":
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "d", d)
        return obj

    @classmethod
    def sqrt(cls, d) -> "QuadExt":
        return cls(0, 1, d)

    def _other(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError("mixing different quadratic extensions")
            return other
        if isinstance(other, (int, Rational)):
            return QuadExt._raw(Fraction(other), Fraction(0), self.d)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt._raw(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt._raw(self.a * o.a + self.d * self.b * o.b,
                            self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt._raw(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("QuadExt division by zero")
        return QuadExt._raw(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt._raw(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            o = self._other(other)
        except ValueError:
            return False
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def sign(self) -> int:
        """Exact sign for a real extension (d > 0)."""
        if self.d < 0:
            raise ValueError("sign is undefined in an imaginary extension")
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa if sa else sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with d*b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else sb if diff < 0 else 0

    def __complex__(self):
        if self.d < 0:
            return complex(float(self.a), float(self.b) * math.sqrt(float(-self.d)))
        return complex(float(self))

    def __float__(self):
        if self.d < 0:
            raise TypeError("imaginary quadratic value has no real float")
        a, b = self.a, self.b
        root = math.sqrt(float(self.d)) if self.d.denominator == 1 else (
            math.sqrt(float(self.d.numerator)) / math.sqrt(float(self.d.denominator)))
        if a and b and (a > 0) != (b > 0):
            # a + b*sqrt(d) = norm / (a - b*sqrt(d)); the denominator does not cancel
            return float(self.norm()) / (float(a) - float(b) * root)
        return float(a) + float(b) * root

    def __str__(self):
        if not self.b:
            return _rat_str(self.a)
        rad = f"sqrt({_rat_str(self.d)})"
        b = "" if self.b == 1 else "-" if self.b == -1 else _rat_str(self.b) + "*"
        if not self.a:
            return b + rad
        if self.b < 0:
            b = b[1:] if b != "-" else ""
            return f"{_rat_str(self.a)} - {b}{rad}"
        return f"{_rat_str(self.a)} + {b}{rad}"

    def __repr__(self):
        return f"QuadExt({self.a!s}, {self.b!s}, d={self.d!s})"
