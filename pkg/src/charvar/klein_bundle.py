"""Characters and boundary-constrained representations of the twisted I-bundle
over the Klein bottle, with fundamental group <s, t | s^2 t^2>.

Coordinates: x = tr s, y = tr t, z = tr st. The relation forces the
character variety to be the cubic xyz - x^2 - y^2 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import GaussRat, MultiPoly
from .points import CharPoint
from .sl2 import Mat2, word_eval
from .trace_calculus import FrickeBasis, Peripheral, Presentation, reduce_trace
from .words import Word

I = GaussRat(0, 1)
BASIS = FrickeBasis(2, ("s", "t"))
RELATOR = Word([("s", 2), ("t", 2)])
MERIDIAN = Word([("s", 1), ("t", 1)])
LONGITUDE = Word([("s", 2)])

# Candidate sign patterns for family C as (s diagonal, t diagonal, t corner).
# Only patterns with corner = -(s diag)(t diag) satisfy s^2 t^2 = 1.
C_SIGN_PATTERNS = {
    "++-": (1, 1, -1),
    "--+": (-1, -1, 1),
    "+-+": (1, -1, 1),
    "-+-": (-1, 1, -1),
}


class RelationError(ValueError):
    """The proposed images do not satisfy s^2 t^2 = 1, or miss the trace constraints."""


def klein_variety_poly() -> MultiPoly:
    """tr(s^2 t^2) - 2 reduces to xyz - x^2 - y^2 (so the relation cuts out this cubic)."""
    p = reduce_trace(RELATOR, BASIS) - 2
    expected = MultiPoly.parse("x*y*z - x^2 - y^2")
    if p != expected:
        raise ArithmeticError(f"relator trace reduced to {p}")
    return p


def reducibility_poly() -> MultiPoly:
    """tr[s, t] - 2 = x^2 + y^2 + z^2 - xyz - 4; zero exactly on reducible characters."""
    return reduce_trace(Word.gen("s").commutator(Word.gen("t")), BASIS) - 2


@dataclass(frozen=True)
class KleinRep:
    kind: str
    signs: tuple
    r: object
    s: Mat2
    t: Mat2

    def images(self) -> dict:
        return {"s": self.s, "t": self.t}

    def image(self, w: Word) -> Mat2:
        return word_eval(w, self.images())

    def character(self) -> CharPoint:
        return CharPoint.make({"x": self.s.trace(), "y": self.t.trace(),
                               "z": (self.s * self.t).trace()}, self.kind)

    def boundary_traces(self) -> tuple:
        """(tr st, tr s^2): traces of the meridian and longitude of the boundary torus."""
        return self.image(MERIDIAN).trace(), self.image(LONGITUDE).trace()


def _is_pm2(v) -> bool:
    return v == 2 or v == -2


def build_rep(kind: str, signs=(1,), r=None) -> KleinRep:
    """Build rho_A, rho_B or rho_C and verify the relation and trace constraints.

    A, B: ``signs`` is (e,) or (e, d); s = [[e i, 1], [0, -e i]] and
    t = [[d i, 0], [4, -d i]] (A) or [[d i, r], [0, -d i]] (B). ``r`` defaults
    to a polynomial variable. C: ``signs`` = (u, v, k) with s = [[u, 1], [0, u]],
    t = [[v, k], [0, v]]; a single sign u stands for (u, u, -1).
    """
    kind = kind.upper()
    signs = tuple(int(x) for x in signs)
    if any(x not in (1, -1) for x in signs):
        raise ValueError(f"signs must be +1/-1, got {signs}")
    if kind in ("A", "B"):
        if len(signs) == 1:
            signs = signs * 2
        if len(signs) != 2:
            raise ValueError("families A and B take one or two signs")
        e, d = signs
        s = Mat2(I * e, GaussRat(1), GaussRat(0), -I * e)
        if kind == "A":
            t = Mat2(I * d, GaussRat(0), GaussRat(4), -I * d)
            r = None
        else:
            if r is None:
                r = MultiPoly.var("r")
            elif not isinstance(r, MultiPoly):
                r = GaussRat.coerce(r)
            t = Mat2(I * d, r, GaussRat(0), -I * d)
    elif kind == "C":
        if len(signs) == 1:
            signs = (signs[0], signs[0], -1)
        if len(signs) != 3:
            raise ValueError("family C takes one or three signs")
        u, v, k = signs
        s = Mat2(GaussRat(u), GaussRat(1), GaussRat(0), GaussRat(u))
        t = Mat2(GaussRat(v), GaussRat(k), GaussRat(0), GaussRat(v))
        r = None
    else:
        raise ValueError(f"unknown family {kind!r}")
    rep = KleinRep(kind, signs, r, s, t)
    rel = rep.image(RELATOR)
    if not rel.is_identity():
        raise RelationError(f"family {kind} with signs {signs}: s^2 t^2 = {rel.to_json_obj()}")
    for m in (s, t):
        if m.det() != 1:
            raise RelationError(f"family {kind} with signs {signs}: determinant is not 1")
    st, s2 = rep.boundary_traces()
    if not (_is_pm2(st) and _is_pm2(s2)):
        raise RelationError(f"family {kind} with signs {signs}: boundary traces {st}, {s2} not +-2")
    return rep


def validate_c_patterns() -> dict:
    """Which candidate sign patterns for family C survive the relation check."""
    out = {}
    for name, signs in C_SIGN_PATTERNS.items():
        try:
            build_rep("C", signs)
            out[name] = True
        except RelationError:
            out[name] = False
    return out


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def family_of(x, y, z) -> str:
    """A/B for the characters (0, 0, +-2); C for the (+-2, +-2, +-2) points."""
    if x == 0 and y == 0:
        return "A" if z == 2 else "B"
    return "C"


def enumerate_constrained_chars() -> list[CharPoint]:
    """All points of the cubic with tr st = +-2 and tr s^2 = x^2 - 2 = +-2, solved exactly."""
    cubic = klein_variety_poly()
    points = set()
    for z in (Fraction(2), Fraction(-2)):
        for target in (Fraction(2), Fraction(-2)):
            # x^2 - 2 = target
            root = _rational_sqrt(target + 2)
            if root is None:
                raise ArithmeticError("irrational x: outside the exact enumeration")
            for x in {root, -root}:
                # y^2 - (x z) y + x^2 = 0 from the cubic
                coeffs = cubic.subs({"x": x, "z": z}).coefficients_in("y")
                c2 = coeffs.get(2, MultiPoly.zero()).constant_term()
                c1 = coeffs.get(1, MultiPoly.zero()).constant_term()
                c0 = coeffs.get(0, MultiPoly.zero()).constant_term()
                disc = c1 * c1 - 4 * c2 * c0
                sq = _rational_sqrt(disc.re)
                if disc.im or sq is None:
                    continue
                for y in {(-c1.re + sq) / (2 * c2.re), (-c1.re - sq) / (2 * c2.re)}:
                    points.add((x, y, z))
    out = []
    for x, y, z in sorted(points):
        out.append(CharPoint.make({"x": _int_if(x), "y": _int_if(y), "z": _int_if(z)},
                                  family_of(x, y, z)))
    return out


def _int_if(q: Fraction):
    return int(q) if q.denominator == 1 else q


def klein_presentation() -> Presentation:
    return Presentation(("s", "t"), (RELATOR,), (Peripheral("T", MERIDIAN, LONGITUDE),))


def exact_sign(v) -> int:
    """Sign of a real exact trace value (+1, -1, 0)."""
    if isinstance(v, MultiPoly):
        if not v.is_constant():
            raise ValueError(f"trace {v} depends on parameters")
        v = v.constant_term()
    v = GaussRat.coerce(v)
    if v.im:
        raise ValueError(f"trace {v} is not real")
    return (v.re > 0) - (v.re < 0)


def rep_base_signs(rep: KleinRep) -> dict:
    """Trace signs of the boundary classes and of the relator under this lift."""
    st, s2 = rep.boundary_traces()
    return {MERIDIAN: exact_sign(st), LONGITUDE: exact_sign(s2)}
