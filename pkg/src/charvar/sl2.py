"""2x2 matrices over an exact or floating coefficient ring.

Entries may be GaussRat, CycloNum, MultiPoly, QuadExt, int/Fraction or
Python complex. A matrix never mixes rings beyond what the entries' own
arithmetic allows; integers act as the ring's 0 and 1.
"""

from __future__ import annotations

import json
from typing import Generic, Mapping, Sequence, TypeVar

import numpy as np

from . import kernels
from .words import Word

T = TypeVar("T")


class Mat2(Generic[T]):
    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: T, b: T, c: T, d: T):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[T]]) -> "Mat2[T]":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    def rows(self) -> list[list[T]]:
        return [[self.a, self.b], [self.c, self.d]]

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other):
        if isinstance(other, Mat2):
            return Mat2(self.a * other.a + self.b * other.c,
                        self.a * other.b + self.b * other.d,
                        self.c * other.a + self.d * other.c,
                        self.c * other.b + self.d * other.d)
        return Mat2(self.a * other, self.b * other, self.c * other, self.d * other)

    def __rmul__(self, scalar):
        return Mat2(scalar * self.a, scalar * self.b, scalar * self.c, scalar * self.d)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def adjugate(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def inverse(self) -> "Mat2":
        det = self.det()
        if det == 1:
            return self.adjugate()
        if not det:
            raise ZeroDivisionError("matrix is not invertible")
        try:
            inv = 1 / det
        except TypeError:
            raise ZeroDivisionError("determinant is not a unit in the coefficient ring") from None
        return self.adjugate() * inv

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Mat2.identity(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Mat2):
            return all(x == y for x, y in zip(self.entries(), other.entries()))
        return NotImplemented

    def __hash__(self):
        return hash(self.entries())

    def is_identity(self) -> bool:
        return self == Mat2.identity()

    def map(self, f) -> "Mat2":
        return Mat2(*(f(x) for x in self.entries()))

    def to_complex(self) -> np.ndarray:
        return np.array([[complex(self.a), complex(self.b)], [complex(self.c), complex(self.d)]])

    def allclose(self, other: "Mat2", tol: float = 1e-9) -> bool:
        return bool(np.max(np.abs(self.to_complex() - other.to_complex())) < tol)

    def to_json_obj(self) -> list:
        return [[entry_text(x) for x in row] for row in self.rows()]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def __repr__(self):
        return f"Mat2({self.to_json_obj()})"


def entry_text(x) -> str:
    if isinstance(x, complex):
        return repr(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def mat_mul(m: Mat2, n: Mat2) -> Mat2:
    return m * n


def mat_inv(m: Mat2) -> Mat2:
    return m.inverse()


def mat_trace(m: Mat2):
    return m.trace()


def mat_det(m: Mat2):
    return m.det()


def word_eval(word: Word, images: Mapping[str, Mat2]) -> Mat2:
    """Product of generator images along ``word``; the empty word gives the identity."""
    result = Mat2.identity()
    for g, e in word.letters:
        if g not in images:
            raise KeyError(f"no image for generator {g!r}")
        result = result * (images[g] ** e)
    return result


# --- numeric helpers ---------------------------------------------------------

def random_sl2(rng: np.random.Generator, scale: float = 0.5) -> Mat2:
    """exp of a random traceless complex matrix: det 1 with moderate norm."""
    return Mat2.from_rows(random_sl2_array(rng, (), scale).tolist())


def random_sl2_array(rng: np.random.Generator, shape=(), scale: float = 0.5) -> np.ndarray:
    shape = tuple(shape) if not isinstance(shape, int) else (shape,)
    z = (rng.standard_normal(shape + (3,)) + 1j * rng.standard_normal(shape + (3,))) * scale
    p, q, r = z[..., 0], z[..., 1], z[..., 2]
    delta = np.sqrt(p * p + q * r)
    cosh = np.cosh(delta)
    small = np.abs(delta) < 1e-8
    sinhc = np.where(small, 1.0 + delta * delta / 6, np.sinh(delta) / np.where(small, 1.0, delta))
    out = np.empty(shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = cosh + sinhc * p
    out[..., 0, 1] = sinhc * q
    out[..., 1, 0] = sinhc * r
    out[..., 1, 1] = cosh - sinhc * p
    return out


def word_eval_batch(word: Word, alphabet: Sequence[str], mats: np.ndarray) -> np.ndarray:
    """Evaluate ``word`` on many tuples; ``mats`` has shape (n, len(alphabet), 2, 2)."""
    index = {g: k for k, g in enumerate(alphabet)}
    letters = np.array([index[g] for g, _ in word.letters], dtype=np.int64)
    powers = np.array([e for _, e in word.letters], dtype=np.int64)
    return kernels.word_eval_batch(letters, powers, mats)


def word_trace_batch(word: Word, alphabet: Sequence[str], mats: np.ndarray) -> np.ndarray:
    prod = word_eval_batch(word, alphabet, mats)
    return prod[:, 0, 0] + prod[:, 1, 1]


__all__ = [
    "Mat2", "mat_mul", "mat_inv", "mat_trace", "mat_det", "word_eval",
    "random_sl2", "random_sl2_array", "word_eval_batch", "word_trace_batch",
    "entry_text",
]
