"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are coordinate vectors in the power basis 1, z, ..., z^(phi(N)-1)
with z = exp(2*pi*i/N). Every product is reduced modulo the N-th cyclotomic
polynomial, so each element has exactly one representation per conductor.
Values with different conductors are combined in Q(zeta_lcm).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .gaussrat import GaussRat, _frac, _rat_str
from .poly import MultiPoly


# --- integer polynomial helpers (coefficient lists, lowest degree first) -----

def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _pmul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a: list, b: list):
    """Quotient and remainder of a by b; b's leading coefficient must be invertible."""
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = Fraction(b[-1])
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        coef = Fraction(a[k + len(b) - 1]) / lead
        if coef:
            q[k] = coef
            for j, y in enumerate(b):
                a[k + j] -= coef * y
    return _trim(q), _trim(a[: len(b) - 1])


@lru_cache(maxsize=None)
def _divisors(n: int) -> tuple:
    return tuple(d for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("cyclotomic polynomials are indexed by positive integers")
    num = [-1] + [0] * (n - 1) + [1]
    den = [1]
    for d in _divisors(n)[:-1]:
        den = _pmul(den, list(cyclotomic_coeffs(d)))
    q, r = _pdivmod(num, den)
    if r:
        raise ArithmeticError("x^n - 1 not divisible by the proper cyclotomic factors")
    return tuple(int(c) for c in q)


def euler_phi(n: int) -> int:
    return len(cyclotomic_coeffs(n)) - 1


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def cyclotomic_polynomial(n: int, var: str = "x") -> MultiPoly:
    """Phi_n as a univariate MultiPoly in ``var``."""
    return MultiPoly((var,), {(k,): c for k, c in enumerate(cyclotomic_coeffs(n)) if c})


# --- field elements ----------------------------------------------------------

class CycloNum:
    """``sum coords[k] * z^k`` with z a primitive ``conductor``-th root of unity.

    Stored as integer numerators over one positive common denominator in
    lowest terms; ``coords`` exposes the rational power-basis vector.
    """

    __slots__ = ("conductor", "_num", "_den")

    def __init__(self, conductor: int, coords=()):
        if not isinstance(conductor, int) or conductor < 1:
            raise ValueError(f"invalid conductor {conductor!r}")
        raw = [_frac(c) for c in coords]
        den = 1
        for c in raw:
            den = den * c.denominator // math.gcd(den, c.denominator)
        nums = [c.numerator * (den // c.denominator) for c in raw]
        _set(self, conductor, *_normalize(_reduce_int(nums, conductor), den))

    def __setattr__(self, name, value):
        raise AttributeError("CycloNum is immutable")

    @classmethod
    def _make(cls, conductor: int, nums: list, den: int) -> "CycloNum":
        obj = object.__new__(cls)
        _set(obj, conductor, *_normalize(nums, den))
        return obj

    @property
    def coords(self) -> tuple:
        return tuple(Fraction(n, self._den) for n in self._num)

    @classmethod
    def zeta(cls, conductor: int, power: int = 1) -> "CycloNum":
        """The root of unity exp(2*pi*i*power/conductor)."""
        if not isinstance(conductor, int) or conductor < 1:
            raise ValueError(f"invalid conductor {conductor!r}")
        k = power % conductor
        return cls._make(conductor, _reduce_int([0] * k + [1], conductor), 1)

    @classmethod
    def rational(cls, value, conductor: int = 1) -> "CycloNum":
        return cls(conductor, [value])

    @classmethod
    def coerce(cls, value, conductor: int = 1) -> "CycloNum":
        if isinstance(value, CycloNum):
            return value
        if isinstance(value, (int, Rational)):
            return cls(conductor, [value])
        if isinstance(value, GaussRat):
            if value.is_real():
                return cls(conductor, [value.re])
            n = math.lcm(conductor, 4)
            return cls(n, [value.re]) + cls.zeta(n, n // 4) * value.im
        raise TypeError(f"cannot convert {type(value).__name__} to CycloNum")

    # structure --------------------------------------------------------
    def lift(self, conductor: int) -> "CycloNum":
        """Re-express in Q(zeta_conductor); conductor must be a multiple of ours."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"{conductor} is not a multiple of {self.conductor}")
        step = conductor // self.conductor
        nums = [0] * ((len(self._num) - 1) * step + 1) if self._num else []
        for k, c in enumerate(self._num):
            nums[k * step] = c
        return CycloNum._make(conductor, _reduce_int(nums, conductor), self._den)

    def _common(self, other: "CycloNum"):
        if self.conductor == other.conductor:
            return self, other
        n = math.lcm(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def normalized_trace(self) -> Fraction:
        """Tr_{Q(zeta_N)/Q}(x) / phi(N); independent of the conductor used."""
        n = self.conductor
        total = Fraction(0)
        for k, c in enumerate(self._num):
            if c:
                g = math.gcd(k, n)
                total += c * Fraction(_mobius(n // g), euler_phi(n // g))
        return total / self._den

    # arithmetic -------------------------------------------------------
    def _other(self, other):
        try:
            return CycloNum.coerce(other, self.conductor)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b = self._common(o)
        den = a._den * b._den // math.gcd(a._den, b._den)
        fa, fb = den // a._den, den // b._den
        nums = [x * fa + y * fb for x, y in _zip_pad(a._num, b._num)]
        return CycloNum._make(a.conductor, nums, den)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum._make(self.conductor, [-c for c in self._num], self._den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            f = Fraction(other)
            return CycloNum._make(self.conductor, [c * f.numerator for c in self._num],
                                  self._den * f.denominator)
        o = self._other(other)
        if o is None:
            return NotImplemented
        a, b = self._common(o)
        n = a.conductor
        # multiply in Z[x]/(x^n - 1), then reduce by Phi_n
        acc = [0] * n
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        acc[(i + j) % n] += x * y
        return CycloNum._make(n, _reduce_int(acc, n), a._den * b._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if not self:
            raise ZeroDivisionError("CycloNum division by zero")
        n = self.conductor
        phi_n = [Fraction(c) for c in cyclotomic_coeffs(n)]
        # extended Euclid: find s with s * self = 1 mod Phi_n
        r0, r1 = phi_n, _trim(list(self.coords))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        if not r1:
            raise ArithmeticError("element is not invertible")
        inv_lead = 1 / r1[0]
        return CycloNum(n, [c * inv_lead for c in s1])

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
        result = CycloNum._make(self.conductor, [1], 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois_conjugate(self, j: int) -> "CycloNum":
        """Apply zeta -> zeta^j (j coprime to the conductor)."""
        n = self.conductor
        if math.gcd(j, n) != 1:
            raise ValueError(f"{j} is not coprime to {n}")
        acc = [0] * n
        for k, c in enumerate(self._num):
            if c:
                acc[(j * k) % n] += c
        return CycloNum._make(n, _reduce_int(acc, n), self._den)

    def complex_conjugate(self) -> "CycloNum":
        return self.galois_conjugate(-1)

    # comparison and conversion ----------------------------------------
    def __eq__(self, other):
        if isinstance(other, (CycloNum, int, Rational, GaussRat)):
            o = other if isinstance(other, CycloNum) else self._other(other)
            a, b = self._common(o)
            return a._den == b._den and a._num == b._num
        return NotImplemented

    def __hash__(self):
        return hash(self.normalized_trace())

    def __bool__(self):
        return any(self._num)

    def __complex__(self):
        n = self.conductor
        return complex(sum(c * cmath.exp(2j * math.pi * k / n)
                           for k, c in enumerate(self._num) if c) / self._den)

    def embed(self, j: int = 1) -> complex:
        """Image under the complex embedding zeta -> exp(2*pi*i*j/N)."""
        return complex(self.galois_conjugate(j))

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono:
                coef = "" if c == 1 else "-" if c == -1 else _rat_str(c) + "*"
            else:
                coef = _rat_str(c)
            parts.append(coef + mono)
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{body} [z=zeta{self.conductor}]"

    def __repr__(self):
        return f"CycloNum({self.conductor}, {[str(c) for c in self.coords]})"

    def to_json_obj(self) -> dict:
        return {"conductor": self.conductor, "coords": [_rat_str(c) for c in self.coords]}

    @classmethod
    def from_json_obj(cls, obj) -> "CycloNum":
        return cls(int(obj["conductor"]), [_frac(c) for c in obj["coords"]])


def _set(obj, conductor, nums, den):
    object.__setattr__(obj, "conductor", conductor)
    object.__setattr__(obj, "_num", nums)
    object.__setattr__(obj, "_den", den)


def _normalize(nums: list, den: int):
    """Pad to phi(N) handled by caller; make den positive and coprime to the numerators."""
    g = den
    for c in nums:
        if c:
            g = math.gcd(g, c)
            if g == 1:
                break
    if den < 0:
        g = -g
    if g != 1:
        nums = [c // g for c in nums]
        den //= g
    return tuple(nums), den


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    return zip(a, b)


def _reduce_int(coeffs: list, n: int) -> list:
    """Reduce an integer coefficient list modulo the monic integer Phi_n; length phi(n)."""
    phi = cyclotomic_coeffs(n)
    deg = len(phi) - 1
    c = list(coeffs)
    if len(c) < deg:
        return c + [0] * (deg - len(c))
    for k in range(len(c) - 1, deg - 1, -1):
        lead = c[k]
        if lead:
            base = k - deg
            for j in range(deg + 1):
                if phi[j]:
                    c[base + j] -= lead * phi[j]
    return c[:deg]


def _psub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def cyclo_embed_and_trace(n: int, conductor: int):
    """Return (zeta_N^n, zeta_N^n + zeta_N^-n) in Q(zeta_N) for N = conductor."""
    if not isinstance(conductor, int) or conductor < 1:
        raise ValueError(f"invalid conductor {conductor!r}")
    root = CycloNum.zeta(conductor, n)
    return root, root + CycloNum.zeta(conductor, -n)
