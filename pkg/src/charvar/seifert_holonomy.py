"""Holonomy-type representations of the thrice-punctured sphere and of
Seifert pieces over D^2(p, q), and the GF(2) analysis of their SL2 lifts.

A lift of a PSL2 representation is a choice of sign for each generator
image such that every relator maps to +I. Two lifts differ by a character
of H_1(piece; Z/2), so the trace sign of a word w changes by the pairing of
that character with the mod-2 class of w. A word's sign is the same in all
lifts exactly when its class vanishes in H_1(piece; Z/2).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from . import gf2
from .exact import CycloNum, GaussRat
from .sl2 import Mat2, word_eval
from .trace_calculus import Peripheral, Presentation
from .words import Word

MODELS = ("rotation", "fuchsian")


class LiftError(ValueError):
    """No choice of generator signs sends every relator to +I."""


# --- explicit representations ------------------------------------------------

def three_punct_sphere_rep() -> dict:
    """A lift of the holonomy of the thrice-punctured sphere; c = ab."""
    a = Mat2(1, 2, 0, 1)
    b = Mat2(1, 0, -2, 1)
    return {"a": a, "b": b, "c": a * b}


@dataclass(frozen=True)
class DiskConeRep:
    p: int
    q: int
    model: str
    conductor: int
    x_q: CycloNum
    a: Mat2
    b: Mat2
    c: Mat2

    def images(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c}

    def xi(self, k: int) -> CycloNum:
        """The primitive k-th root exp(2 pi i / k) in Q(zeta_N), k dividing N."""
        return CycloNum.zeta(self.conductor, self.conductor // k)

    def target_trace(self) -> CycloNum:
        """xi_2q + xi_2q^-1, negated for the Fuchsian sign model."""
        t = self.xi(2 * self.q) + self.xi(2 * self.q) ** -1
        return t if self.model == "rotation" else -t

    def scalar_equation(self) -> CycloNum:
        """xi_2p + xi_2p^-1 + 2 x_q - target; zero when x_q is correct."""
        return self.xi(2 * self.p) + self.xi(2 * self.p) ** -1 + 2 * self.x_q - self.target_trace()

    def to_json_obj(self) -> dict:
        return {
            "p": self.p, "q": self.q, "model": self.model, "conductor": self.conductor,
            "x_q": self.x_q.to_json_obj(),
            "images": {g: m.to_json_obj() for g, m in self.images().items()},
            "trace_c": str(self.c.trace()),
        }


def _check_pq(p: int, q: int) -> None:
    if not (isinstance(p, int) and isinstance(q, int)) or p < 2 or q <= 2:
        raise ValueError(f"need p >= 2 and q > 2, got p={p}, q={q}")


@lru_cache(maxsize=256)  # results are immutable
def disk_cone_rep(p: int, q: int, model: str = "rotation") -> DiskConeRep:
    """a = [[1,2],[0,1]], b = [[xi, 0], [x_q, 1/xi]] with xi = xi_2p, c = ab.

    x_q solves xi + 1/xi + 2 x_q = T, where T = xi_2q + 1/xi_2q in the
    rotation model and -(xi_2q + 1/xi_2q) in the Fuchsian sign model
    (the continuous deformation of the thrice-punctured sphere lift, where
    tr c = -2 in the limit).
    """
    _check_pq(p, q)
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {MODELS}")
    n = math.lcm(2 * p, 2 * q)
    xi_p = CycloNum.zeta(n, n // (2 * p))
    xi_q = CycloNum.zeta(n, n // (2 * q))
    target = xi_q + xi_q.inverse()
    if model == "fuchsian":
        target = -target
    x_q = (target - xi_p - xi_p.inverse()) * Fraction(1, 2)
    one, zero = CycloNum.rational(1, n), CycloNum.rational(0, n)
    a = Mat2(one, 2 * one, zero, one)
    b = Mat2(xi_p, zero, x_q, xi_p.inverse())
    rep = DiskConeRep(p, q, model, n, x_q, a, b, a * b)
    if rep.scalar_equation() != 0:
        raise ArithmeticError("x_q does not satisfy its defining equation")
    if rep.c.trace() != rep.target_trace():
        raise ArithmeticError("tr c differs from the cone-angle trace")
    for m in (a, b, rep.c):
        if m.det() != 1:
            raise ArithmeticError("image with determinant different from 1")
    return rep


def disk_cone_presentation(p: int, q: int, r1: int, r2: int) -> Presentation:
    """<a,b,c,h | c^-1 a b, [h,a], [h,b], [h,c], b^p h^r1, c^q h^r2>, boundary torus (a, h)."""
    _check_pq(p, q)
    if math.gcd(p, r1) != 1 or math.gcd(q, r2) != 1:
        raise ValueError(f"Seifert invariants need gcd(p, r1) = gcd(q, r2) = 1, got "
                         f"({p}, {r1}), ({q}, {r2})")
    a, b, c, h = (Word.gen(g) for g in "abch")
    relators = (c.inverse() * a * b, h.commutator(a), h.commutator(b), h.commutator(c),
                b ** p * h ** r1, c ** q * h ** r2)
    return Presentation(("a", "b", "c", "h"), relators, (Peripheral("T", a, h),), fiber=h,
                        extra={"p": p, "q": q, "r1": r1, "r2": r2})


def disk_cone_reference_images(p: int, q: int, model: str = "fuchsian") -> dict:
    rep = disk_cone_rep(p, q, model)
    one = CycloNum.rational(1, rep.conductor)
    zero = CycloNum.rational(0, rep.conductor)
    return {**rep.images(), "h": Mat2(one, zero, zero, one)}


# --- lifting -----------------------------------------------------------------

def relation_matrix(piece: Presentation) -> list[list[int]]:
    """Mod-2 abelianized relators: one row per relator, one column per generator."""
    return [[e & 1 for e in r.exponent_sums(piece.generators)] for r in piece.relators]


def class_vector(piece: Presentation, w: Word) -> list[int]:
    return [e & 1 for e in w.exponent_sums(piece.generators)]


def _pm_identity_sign(m: Mat2) -> int:
    if m == Mat2.identity():
        return 1
    if m == -Mat2.identity():
        return -1
    raise LiftError(f"relator image {m.to_json_obj()} is not +-I")


def lift_from_reference(piece: Presentation, images: Mapping[str, Mat2]):
    """Flip generator signs so every relator maps to +I.

    Returns (lifted images, flip vector). Relators of the reference images
    must evaluate to +-I exactly; LiftError when no flip pattern works.
    """
    omega = [0 if _pm_identity_sign(word_eval(r, images)) == 1 else 1 for r in piece.relators]
    rows = relation_matrix(piece)
    flips = gf2.solve(rows, omega, len(piece.generators)) if rows else [0] * len(piece.generators)
    if flips is None:
        raise LiftError("relator signs are not a coboundary: the representation has no SL2 lift")
    lifted = {g: (-images[g] if f else images[g]) for g, f in zip(piece.generators, flips)}
    return lifted, flips


def trace_sign(v) -> int:
    """Sign of a real trace: exact for rationals, via the complex embedding otherwise."""
    if isinstance(v, CycloNum) and v.is_rational():
        v = v.coords[0] if v.coords else Fraction(0)
    if isinstance(v, (int, Fraction)):
        return (v > 0) - (v < 0)
    if isinstance(v, GaussRat):
        if v.im:
            raise ValueError(f"trace {v} is not real")
        return (v.re > 0) - (v.re < 0)
    z = complex(v)
    if abs(z.imag) > 1e-9 * max(1.0, abs(z)):
        raise ValueError(f"trace {v} is not real")
    if abs(z.real) < 1e-12:
        return 0
    return 1 if z.real > 0 else -1


def peripheral_classes(piece: Presentation) -> list[tuple[int, tuple[int, int], Word]]:
    """(torus index, (alpha, beta), word m^alpha l^beta) for the three nonzero classes per torus."""
    out = []
    for i, per in enumerate(piece.peripherals):
        for ab in ((1, 0), (0, 1), (1, 1)):
            w = (per.meridian if ab[0] else Word()) * (per.longitude if ab[1] else Word())
            out.append((i, ab, w))
    return out


def class_label(w: Word) -> str:
    """Compact label: "ah" for single-letter generators with unit exponents, else spaced."""
    if all(len(g) == 1 and e == 1 for g, e in w.letters):
        return "".join(g for g, _ in w.letters)
    return str(w)


@dataclass(frozen=True)
class SignLiftReport:
    """Trace-sign behaviour of peripheral classes over all SL2 lifts.

    Boundary sign characters are bit vectors (m_0, l_0, m_1, l_1, ...), bit 1
    meaning trace sign -1. The achievable characters are base_bits + span(twists).
    ``kernel`` spans the classes dying in H_1(piece; Z/2), whose bits are fixed.
    """

    h1_dim: int | None
    tori: int
    fixed_classes: tuple = ()
    forced_negative: tuple = ()
    flexible: tuple = ()
    base_bits: tuple = ()
    twists: tuple = ()
    kernel: tuple = ()
    kernel_bits: tuple = ()
    declared: bool = False
    notes: tuple = ()

    @property
    def negative_flexible(self) -> bool:
        """Every kernel class carries the bit forced by negative-flexibility."""
        return all(b == flexible_bit(k) for k, b in zip(self.kernel, self.kernel_bits)) \
            and len(self.kernel) == self.tori

    def achievable(self) -> list[tuple]:
        """All boundary sign characters reachable by some lift."""
        out = set()
        for coeffs in itertools.product((0, 1), repeat=len(self.twists)):
            v = list(self.base_bits)
            for c, t in zip(coeffs, self.twists):
                if c:
                    v = [x ^ y for x, y in zip(v, t)]
            out.add(tuple(v))
        return sorted(out)

    def to_json_obj(self) -> dict:
        return {
            "h1_dim": self.h1_dim, "tori": self.tori,
            "fixed_classes": list(self.fixed_classes),
            "forced_negative": list(self.forced_negative),
            "flexible": list(self.flexible),
            "base_bits": list(self.base_bits), "twists": [list(t) for t in self.twists],
            "kernel": [list(k) for k in self.kernel], "kernel_bits": list(self.kernel_bits),
            "declared": self.declared, "negative_flexible": self.negative_flexible,
        }


def flexible_bit(kernel_vec: Sequence[int]) -> int:
    """Bit a kernel class must carry in a negative-flexible piece.

    Choosing each touched torus's component as its peripheral class and
    asking all of them to have trace -2 forces the sign bit to be the
    number of touched tori mod 2.
    """
    touched = sum(1 for i in range(0, len(kernel_vec), 2) if kernel_vec[i] or kernel_vec[i + 1])
    return touched & 1


def _reduce_mod_rowspace(red: list, pivots: list, v: list) -> list:
    v = list(v)
    for row, p in zip(red, pivots):
        if v[p]:
            v = [x ^ y for x, y in zip(v, row)]
    return v


def sign_lift_report(piece: Presentation, base_signs: Mapping[Word, int]) -> SignLiftReport:
    """Fixed and flexible peripheral classes from the mod-2 relator matrix.

    ``base_signs`` maps the peripheral class words m, l, ml of every torus
    (and optionally relators or other words) to the trace sign of one
    valid lift.
    """
    n = len(piece.generators)
    rows = relation_matrix(piece)
    red, pivots = gf2.rref(rows, n) if rows else ([], [])
    h1_dim = n - len(pivots)
    lift_space = gf2.nullspace(rows, n) if rows else [[int(i == j) for j in range(n)] for i in range(n)]

    signs = {Word(w.letters) if isinstance(w, Word) else w: s for w, s in base_signs.items()}
    for r in piece.relators:
        if signs.get(r, 1) != 1:
            raise ValueError(f"inconsistent base signs: relator {r} has trace sign -1")
    classes = peripheral_classes(piece)
    bits = {}
    for i, ab, w in classes:
        if w not in signs:
            raise ValueError(f"base_signs lacks peripheral word {w}")
        s = signs[w]
        if s not in (1, -1):
            raise ValueError(f"sign of {w} must be +1 or -1, got {s}")
        bits[(i, ab)] = 0 if s == 1 else 1
    for i in range(len(piece.peripherals)):
        if bits[(i, (1, 1))] != bits[(i, (1, 0))] ^ bits[(i, (0, 1))]:
            raise ValueError(f"inconsistent base signs on torus {i}: sign(ml) != sign(m) sign(l)")

    t = len(piece.peripherals)
    vecs = []  # class vectors of m_0, l_0, m_1, l_1, ...
    for per in piece.peripherals:
        vecs.append(class_vector(piece, per.meridian))
        vecs.append(class_vector(piece, per.longitude))
    reduced = [_reduce_mod_rowspace(red, pivots, v) for v in vecs]
    # boundary kernel: combinations of the 2t boundary vectors lying in the rowspace
    kernel = gf2.nullspace(gf2.transpose(reduced, n), 2 * t) if t else []
    base_bits = []
    for i in range(t):
        base_bits += [bits[(i, (1, 0))], bits[(i, (0, 1))]]
    kernel_bits = [gf2.dot(k, base_bits) for k in kernel]
    twists = gf2.span_basis([[gf2.dot(v, k) for v in vecs] for k in lift_space], 2 * t)

    fixed, forced, flexible = [], [], []
    for i, ab, w in classes:
        v = [0] * (2 * t)
        v[2 * i], v[2 * i + 1] = ab
        label = class_label(w)
        if gf2.in_rowspace(rows, class_vector(piece, w)) if rows else not any(class_vector(piece, w)):
            fixed.append(label)
            if bits[(i, ab)]:
                forced.append(label)
        else:
            flexible.append(label)
    return SignLiftReport(h1_dim, t, tuple(fixed), tuple(forced), tuple(flexible),
                          tuple(base_bits), tuple(tuple(x) for x in twists),
                          tuple(tuple(k) for k in kernel), tuple(kernel_bits))


def base_signs_from_images(piece: Presentation, images: Mapping[str, Mat2]) -> dict:
    return {w: trace_sign(word_eval(w, images).trace()) for _, _, w in peripheral_classes(piece)}


def report_from_images(piece: Presentation, images: Mapping[str, Mat2]) -> SignLiftReport:
    """Lift the reference images, read off peripheral signs, and analyse."""
    lifted, _ = lift_from_reference(piece, images)
    return sign_lift_report(piece, base_signs_from_images(piece, lifted))


def declared_report(tori: int, kernel: Sequence[Sequence[int]],
                    kernel_bits: Sequence[int] | None = None, h1_dim: int | None = None,
                    note: str = "") -> SignLiftReport:
    """A report for a piece known only through its boundary kernel.

    Kernel bits default to the negative-flexible pattern. The achievable
    characters are all s with s . k = bit(k) on the kernel.
    """
    n = 2 * tori
    kernel = [[int(x) & 1 for x in k] for k in kernel]
    if any(len(k) != n for k in kernel):
        raise ValueError(f"kernel vectors need {n} entries")
    if gf2.rank(kernel, n) != len(kernel):
        raise ValueError("kernel vectors are linearly dependent")
    if len(kernel) != tori:
        raise ValueError(f"boundary kernel has dimension {len(kernel)}, expected {tori} "
                         "(half of the boundary homology)")
    bits = [flexible_bit(k) for k in kernel] if kernel_bits is None else [int(b) & 1 for b in kernel_bits]
    if len(bits) != len(kernel):
        raise ValueError("one sign bit per kernel vector is required")
    # bits must extend linearly; check every kernel element against the rule when defaulted
    if kernel_bits is None:
        for coeffs in itertools.product((0, 1), repeat=len(kernel)):
            v, b = [0] * n, 0
            for c, k, kb in zip(coeffs, kernel, bits):
                if c:
                    v = [x ^ y for x, y in zip(v, k)]
                    b ^= kb
            if any(v) and b != flexible_bit(v):
                raise ValueError("no negative-flexible sign pattern exists for this kernel")
    base = gf2.solve(kernel, bits, n)
    twists = gf2.nullspace(kernel, n)
    fixed, forced, flexible = [], [], []
    for i in range(tori):
        for ab, name in (((1, 0), "m"), ((0, 1), "l"), ((1, 1), "ml")):
            v = [0] * n
            v[2 * i], v[2 * i + 1] = ab
            label = f"{name}{i}" if tori > 1 else name
            if gf2.in_rowspace(kernel, v):
                fixed.append(label)
                if gf2.dot(base, v):
                    forced.append(label)
            else:
                flexible.append(label)
    return SignLiftReport(h1_dim, tori, tuple(fixed), tuple(forced), tuple(flexible),
                          tuple(base), tuple(tuple(t) for t in twists),
                          tuple(tuple(k) for k in kernel), tuple(bits), declared=True,
                          notes=(note,) if note else ())


def annulus_cone_presentation(r: int, beta: int) -> Presentation:
    """Seifert piece over the annulus with one cone point of order r; tori (d1, h), (d2, h)."""
    if r < 2 or math.gcd(r, beta) != 1:
        raise ValueError(f"need r >= 2 and gcd(r, beta) = 1, got r={r}, beta={beta}")
    d1, d2, z, h = (Word.gen(g) for g in ("d1", "d2", "z", "h"))
    relators = (d1 * d2 * z, h.commutator(d1), h.commutator(d2), h.commutator(z), z ** r * h ** beta)
    return Presentation(("d1", "d2", "z", "h"), relators,
                        (Peripheral("T0", d1, h), Peripheral("T1", d2, h)), fiber=h,
                        extra={"r": r, "beta": beta})


def boundary_kernel(piece: Presentation) -> list[list[int]]:
    """Kernel of H_1(boundary; Z/2) -> H_1(piece; Z/2) in (m_0, l_0, m_1, l_1, ...) coordinates."""
    signs = {w: 1 for _, _, w in peripheral_classes(piece)}
    return [list(k) for k in sign_lift_report(piece, signs).kernel]


def annulus_cone_report(r: int, beta: int = 1) -> SignLiftReport:
    """Kernel from the presentation; signs declared by negative-flexibility (no matrices)."""
    piece = annulus_cone_presentation(r, beta)
    n = len(piece.generators)
    h1 = n - gf2.rank(relation_matrix(piece), n)
    return declared_report(2, boundary_kernel(piece), h1_dim=h1,
                           note=f"annulus cone piece r={r}, beta={beta}: signs declared")


# --- brute force -------------------------------------------------------------

def brute_force_signs(piece: Presentation, images: Mapping[str, Mat2], tol: float = 1e-8) -> dict:
    """Enumerate every generator sign pattern numerically; keep those sending
    all relators to +I and collect the trace signs of each peripheral class.

    Returns {"lifts": count, "signs": {label: sorted list of observed signs}}.
    """
    gens = piece.generators
    num = {g: images[g].to_complex() for g in gens}
    eye = np.eye(2)

    def evaluate(w: Word, mats: dict) -> np.ndarray:
        out = eye.astype(complex)
        for g, e in w.letters:
            m = mats[g] if e > 0 else np.linalg.inv(mats[g])
            out = out @ np.linalg.matrix_power(m, abs(e))
        return out

    classes = peripheral_classes(piece)
    seen = {class_label(w): set() for _, _, w in classes}
    count = 0
    for pattern in itertools.product((1, -1), repeat=len(gens)):
        mats = {g: s * num[g] for g, s in zip(gens, pattern)}
        if all(np.max(np.abs(evaluate(r, mats) - eye)) < tol for r in piece.relators):
            count += 1
            for _, _, w in classes:
                tr = np.trace(evaluate(w, mats))
                seen[class_label(w)].add(1 if tr.real > 0 else -1)
    return {"lifts": count, "signs": {k: sorted(v) for k, v in seen.items()}}


def brute_force_agrees(report: SignLiftReport, brute: dict) -> bool:
    """Fixed classes are those with one observed sign; forced ones observe only -1."""
    if brute["lifts"] == 0 or (report.h1_dim is not None and brute["lifts"] != 2 ** report.h1_dim):
        return False
    fixed = {k for k, v in brute["signs"].items() if len(v) == 1}
    forced = {k for k, v in brute["signs"].items() if v == [-1]}
    return fixed == set(report.fixed_classes) and forced == set(report.forced_negative)


# --- disk-cone case analysis -------------------------------------------------

def disk_cone_case(p: int, q: int, r1: int, r2: int) -> str:
    """Parity case label: "1" when p or q is even, else "2.1".."2.4" by (r1, r2) parity."""
    if p % 2 == 0 or q % 2 == 0:
        return "1"
    return {(0, 0): "2.1", (0, 1): "2.2", (1, 0): "2.3", (1, 1): "2.4"}[(r1 % 2, r2 % 2)]


@dataclass(frozen=True)
class CaseResult:
    p: int
    q: int
    r1: int
    r2: int
    case: str
    model: str
    forced_class: str | None
    forced_trace: int | None
    report: SignLiftReport = field(repr=False)

    def to_json_obj(self) -> dict:
        return {"p": self.p, "q": self.q, "r1": self.r1, "r2": self.r2, "case": self.case,
                "model": self.model, "forced_class": self.forced_class,
                "forced_trace": self.forced_trace, "report": self.report.to_json_obj()}


def disk_cone_analysis(p: int, q: int, r1: int, r2: int, model: str = "fuchsian"):
    """(presentation, lifted images, report) for the D(p, q) piece."""
    piece = disk_cone_presentation(p, q, r1, r2)
    images = disk_cone_reference_images(p, q, model)
    lifted, _ = lift_from_reference(piece, images)
    report = sign_lift_report(piece, base_signs_from_images(piece, lifted))
    return piece, lifted, report


def disk_cone_case_table(p: int, q: int, r1: int, r2: int, model: str = "fuchsian") -> CaseResult:
    """The peripheral class whose trace sign is the same in every lift, with that trace."""
    piece, lifted, report = disk_cone_analysis(p, q, r1, r2, model)
    if len(report.fixed_classes) != 1:
        raise ArithmeticError(f"expected one fixed boundary class, found {report.fixed_classes}")
    label = report.fixed_classes[0]
    word = next(w for _, _, w in peripheral_classes(piece) if class_label(w) == label)
    tr = word_eval(word, lifted).trace()
    value = tr.coords[0] if tr.is_rational() and tr.coords else None
    return CaseResult(p, q, r1, r2, disk_cone_case(p, q, r1, r2), model, label,
                      int(value) if value is not None and value.denominator == 1 else None, report)
