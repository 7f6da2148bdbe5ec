"""Matching-equation ideals for glued twice-punctured tori, the three
pretzel components C1, C2, C3, and numerical curve tracing toward infinity.

Rank-3 coordinates of a twice-punctured torus with free generators a, b, c
are x1, x2, x3, x12, x13, x23, x123 (and x132 = P - x123). A gluing
identifies two such tori; the unprimed side carries suffix ``_g<k>`` and the
primed side ``_g<k>p``.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .exact import MultiPoly, QuadExt
from .points import CharPoint, CurveSample
from .trace_calculus import RANK3_VARS, goldman_quadratic, puncture_identity, reduce_trace
from .words import Word, parse_word

RESIDUAL_TOL = 1e-10
TRACE_TOL = 1e-9


# --- gluing ideal ------------------------------------------------------------

def _side_vars(g: int, primed: bool) -> dict:
    suffix = f"_g{g}p" if primed else f"_g{g}"
    return {v: v + suffix for v in RANK3_VARS}


def _rename(p: MultiPoly, names: Mapping[str, str]) -> MultiPoly:
    return p.subs({v: MultiPoly.var(names[v]) for v in p.variables if v in names})


@dataclass(frozen=True)
class MatchingIdeal:
    n: int
    full: tuple            # (label, poly): eight equations per gluing
    reduced: tuple         # (label, poly): five per gluing plus one per interior region
    derivations: tuple     # per gluing: (label, check poly, residual without component choice)

    @property
    def polynomials(self) -> list[MultiPoly]:
        return [p for _, p in self.reduced]

    def derivation_ok(self) -> bool:
        return all(check.is_zero() for _, check, _ in self.derivations)

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "full_count": len(self.full), "reduced_count": len(self.reduced),
            "full": [{"label": l, "poly": p.to_text()} for l, p in self.full],
            "reduced": [{"label": l, "poly": p.to_text()} for l, p in self.reduced],
            "x23_derivation": [{"gluing": l, "zero": c.is_zero(),
                                "residual_without_component_choice": r.to_text()}
                               for l, c, r in self.derivations],
        }


def annulus_trace(names: Mapping[str, str]) -> MultiPoly:
    """tr(b c^-1) = x2 x3 - x23: trace of the puncture class on one side."""
    return _rename(reduce_trace(parse_word("b C"), 3), names)


def build_gluing_ideal(n: int) -> MatchingIdeal:
    """Matching equations for a line of n regions glued along n - 1 pairs of tori."""
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"need at least two regions, got {n!r}")
    P, _ = goldman_quadratic()
    pid = puncture_identity()
    full, reduced, derivs = [], [], []
    for g in range(1, n):
        u, v = _side_vars(g, False), _side_vars(g, True)
        for name in RANK3_VARS:
            full.append((f"g{g}:{name}", MultiPoly.var(u[name]) - MultiPoly.var(v[name])))
        x132 = (_rename(P, u) - MultiPoly.var(u["x123"])) - (_rename(P, v) - MultiPoly.var(v["x123"]))
        full.append((f"g{g}:x132", x132))
        for name in ("x1", "x2", "x3", "x12", "x13"):
            reduced.append((f"g{g}:{name}", MultiPoly.var(u[name]) - MultiPoly.var(v[name])))
        # x23 = x23' from the five equations, both puncture identities and x123 = x123'
        diff = MultiPoly.var(u["x23"]) - MultiPoly.var(v["x23"])
        expr = diff + (_rename(pid, u) - _rename(pid, v)) * Fraction(1, 2)
        five = {v[name]: MultiPoly.var(u[name]) for name in ("x1", "x2", "x3", "x12", "x13")}
        residual = expr.subs(five)
        check = residual.subs({v["x123"]: MultiPoly.var(u["x123"])})
        derivs.append((f"g{g}", check, residual))
    for i in range(2, n):
        left = annulus_trace(_side_vars(i - 1, True))
        right = annulus_trace(_side_vars(i, False))
        reduced.append((f"region{i}:annulus", left - right))
    if len(reduced) != 6 * n - 7:
        raise ArithmeticError(f"reduced count {len(reduced)} != 6n - 7")
    return MatchingIdeal(n, tuple(full), tuple(reduced), tuple(derivs))


def derivation_numeric_oracle(rng: random.Random, trials: int = 50) -> float:
    """Largest deviation of x23 - x23' from (x1/2)(x123 - x123') on random puncture solutions.

    Both sides share x1, x2, x3, x12, x13; x23 and x23' are solved from the
    puncture identity with independent x123, x123'.
    """
    pid = puncture_identity()
    coeffs = pid.coefficients_in("x23")
    worst = 0.0
    for _ in range(trials):
        shared = {k: complex(rng.gauss(0, 1), rng.gauss(0, 1)) for k in ("x1", "x2", "x3", "x12", "x13")}
        t, t2 = (complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(2))

        def solve_x23(x123):
            pt = {**shared, "x123": x123}
            c1 = complex(coeffs[1].eval(pt))
            c0 = complex(coeffs[0].eval(pt))
            return -c0 / c1

        lhs = solve_x23(t) - solve_x23(t2)
        worst = max(worst, abs(lhs - shared["x1"] / 2 * (t - t2)))
    return worst


# --- pretzel components ------------------------------------------------------

PRETZEL_WORDS = {
    "m1": parse_word("a^3 b a b a b"),
    "m2": parse_word("a^3 b a b a"),
    "l1": parse_word("b^-1 a b a b"),
    "l2": parse_word("b^-1 a b a b a"),
}


def pretzel_word(name: str) -> Word:
    if name == "[m1,l1]":
        return PRETZEL_WORDS["m1"].commutator(PRETZEL_WORDS["l1"])
    return PRETZEL_WORDS[name]


def pretzel_matching_system() -> list[MultiPoly]:
    """tr m1 - tr m2, tr l1 - tr l2, tr(m1 l1) - tr(m2 l2) in x = tr a, y = tr b, z = tr ab."""
    w = PRETZEL_WORDS
    t = lambda word: reduce_trace(word, 2)  # noqa: E731
    return [t(w["m1"]) - t(w["m2"]), t(w["l1"]) - t(w["l2"]),
            t(w["m1"] * w["l1"]) - t(w["m2"] * w["l2"])]


def _sample_params(count: int, rng: random.Random) -> list[Fraction]:
    """Distinct rational parameters: small integers and halves, then random fractions."""
    out, seen = [], set()
    base = [Fraction(k, d) for d in (1, 2, 3) for k in range(-6, 7)]
    for q in base + [Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(4 * count)]:
        if q not in seen:
            seen.add(q)
            out.append(q)
        if len(out) == count:
            break
    return out


def _quad_roots(a, b, c) -> list:
    """Both roots of a y^2 + b y + c in Q or Q(sqrt D), D = b^2 - 4ac (a, b, c rational)."""
    disc = b * b - 4 * a * c
    num, den = disc.numerator, disc.denominator
    rn, rd = math.isqrt(abs(num)), math.isqrt(den)
    if disc >= 0 and rn * rn == num and rd * rd == den:
        s = Fraction(rn, rd)
        return [(-b + s) / (2 * a), (-b - s) / (2 * a)]
    # sqrt(num/den) = sqrt(num*den)/den; keep the radicand an integer
    d = num * den
    return [QuadExt(-b / (2 * a), Fraction(1, 2 * a * den), d),
            QuadExt(-b / (2 * a), Fraction(-1, 2 * a * den), d)]


@dataclass(frozen=True)
class ComponentSpec:
    name: str
    polys: tuple                         # defining polynomials in x, y, z
    parametrization: dict | None = None  # var -> MultiPoly in "t"
    sampler: Callable | None = field(default=None, compare=False)
    degree_note: str = ""

    def sample(self, count: int, rng: random.Random) -> list[dict]:
        if self.sampler is not None:
            return self.sampler(count, rng)
        if self.parametrization is None:
            raise ValueError(f"component {self.name} has no sampling method")
        pts = []
        for t in _sample_params(count, rng):
            pts.append({v: p.eval({"t": t}).re if p.used_variables() else p.constant_term().re
                        for v, p in self.parametrization.items()})
        return pts

    def residual(self, point: Mapping[str, object]) -> float:
        return max(normalized_residual(p, point) for p in self.polys)


def normalized_residual(p: MultiPoly, point: Mapping[str, object]) -> float:
    """|p(pt)| / max(1, sum of |terms|): cancellation-aware residual in double precision."""
    fpt = {k: complex(v) for k, v in point.items()}
    val = abs(complex(p.eval(fpt)))
    return val / max(1.0, p.abs_term_sum(fpt))


def _c2_sampler(count: int, rng: random.Random) -> list[dict]:
    pts = []
    r = math.sqrt(3.0)
    for k in range(count):
        theta = 2 * math.pi * (k + rng.random()) / count
        x, z = r * math.cos(theta), r * math.sin(theta)
        pts.append({"x": x, "y": x * z, "z": z})
    return pts


def c3_quadratic(z) -> tuple:
    """Coefficients (a, b, c) of the C3 equation as a quadratic in y at x = z."""
    return -z, z ** 3 - z + 1, -z ** 3 - z ** 2 + 3 * z


def _c3_sampler(count: int, rng: random.Random) -> list[dict]:
    pts = []
    params = [t for t in _sample_params(3 * count, rng) if t != 0]
    for t in params:
        for y in _quad_roots(*c3_quadratic(t)):
            pts.append({"x": t, "y": y, "z": t})
            if len(pts) == count:
                return pts
    return pts


def pretzel_components() -> dict:
    P = MultiPoly.parse
    t = MultiPoly.var("t")
    return {
        "C1": ComponentSpec("C1", (P("x + z - 1"), P("z^2 + y - z - 2")),
                            {"x": 1 - t, "y": t + 2 - t * t, "z": t}),
        "C2": ComponentSpec("C2", (P("x*z - y"), P("x^2 + z^2 - 3"), P("z^3 + x*y - 3*z")),
                            sampler=_c2_sampler,
                            degree_note="circle x^2 + z^2 = 3 with y = xz, sampled by angle"),
        "C3": ComponentSpec("C3", (P("x - z"), P("y*z^3 - y^2*z - z^3 - y*z - z^2 + y + 3*z")),
                            sampler=_c3_sampler,
                            degree_note="x = z, y from the quadratic in y, exact in Q(sqrt D)"),
    }


def component_membership(comp: ComponentSpec, polys: Sequence[MultiPoly], samples: int,
                         rng: random.Random) -> dict:
    """Exact substitution when parametrized, else the worst residual over samples."""
    if comp.parametrization is not None:
        zero = [p.subs(comp.parametrization).is_zero() for p in polys]
        return {"component": comp.name, "method": "substitution", "exact_zero": zero,
                "ok": all(zero)}
    pts = comp.sample(samples, rng)
    worst = max(normalized_residual(p, pt) for p in polys for pt in pts)
    defining = max(comp.residual(pt) for pt in pts)
    return {"component": comp.name, "method": "sampling", "samples": len(pts),
            "max_residual": worst, "max_defining_residual": defining,
            "note": comp.degree_note, "ok": len(pts) >= samples and worst < 1e-9}


# --- trace constancy ---------------------------------------------------------

@dataclass(frozen=True)
class TraceVerdict:
    constant: bool
    value: object = None         # constant value when constant
    witnesses: tuple = ()        # ((point, value), (point, value)) when nonconstant
    exact: bool = False
    samples: int = 0

    def to_json_obj(self) -> dict:
        obj = {"constant": self.constant, "exact": self.exact, "samples": self.samples}
        if self.constant:
            obj["value"] = _num_text(self.value)
        else:
            obj["witnesses"] = [{"point": {k: _num_text(v) for k, v in sorted(p.items())},
                                 "value": _num_text(val)} for p, val in self.witnesses]
        return obj


def _num_text(v) -> str:
    if isinstance(v, complex):
        return repr(complex(round(v.real, 12) + 0.0, round(v.imag, 12) + 0.0))
    if isinstance(v, float):
        return repr(round(v, 12) + 0.0)
    return str(v)


def _as_complex(v) -> complex:
    if isinstance(v, QuadExt):
        return complex(float(v)) if v.d > 0 else complex(v)
    return complex(v)


def trace_on_component(w: Word, comp: ComponentSpec, samples: int = 25,
                       rng: random.Random | None = None, tol: float = TRACE_TOL) -> TraceVerdict:
    """Constant value of tr w on the component, or two witnesses with different values."""
    rng = rng or random.Random(0)
    poly = reduce_trace(w, 2)
    if comp.parametrization is not None:
        along = poly.subs(comp.parametrization)
        if along.is_constant():
            return TraceVerdict(True, along.constant_term(), exact=True, samples=0)
    pts = comp.sample(samples, rng)
    if len(pts) < 2:
        raise ValueError(f"only {len(pts)} samples on {comp.name}")
    vals = [(pt, _as_complex(poly.eval(pt))) for pt in pts]
    order = sorted(vals, key=lambda pv: (pv[1].real, pv[1].imag))
    lo, hi = order[0], order[-1]
    spread = max(abs(v - lo[1]) for _, v in vals)
    if spread < tol:
        mean = sum(v for _, v in vals) / len(vals)
        return TraceVerdict(True, complex(round(mean.real, 12) + 0.0, round(mean.imag, 12) + 0.0),
                            samples=len(pts))
    return TraceVerdict(False, witnesses=(lo, hi), samples=len(pts))


# --- curve tracing -----------------------------------------------------------

DEFAULT_WATCHED = ("a", "l1", "m1", "[m1,l1]")


def _watched_words(watched) -> dict:
    out = {}
    for item in watched:
        if isinstance(item, Word):
            out[str(item)] = item
        elif item == "a":
            out["a"] = Word.gen("a")
        elif item in PRETZEL_WORDS or item == "[m1,l1]":
            out[item] = pretzel_word(item)
        else:
            out[item] = parse_word(item)
    return out


def _stable_roots(a: complex, b: complex, c: complex) -> tuple:
    disc = b * b - 4 * a * c
    s = cmath.sqrt(disc)
    q = -(b + s) / 2 if (b.conjugate() * s).real >= 0 else -(b - s) / 2
    r1 = q / a
    r2 = c / q if q != 0 else -b / a - r1
    return (r1, r2), disc


def _branch_points(z) -> tuple:
    """Both y-roots at parameter z: exact in Q(sqrt D) for rational z, else stable floats."""
    if isinstance(z, (int, Fraction)):
        z = Fraction(z)
        return tuple(_quad_roots(*c3_quadratic(z))), c3_quadratic(z)
    zc = complex(z)
    roots, _ = _stable_roots(*(complex(v) for v in c3_quadratic(zc)))
    return roots, c3_quadratic(zc)


def _match(prev: list, new: list) -> list:
    """Order new roots to follow prev by log-distance."""
    def dist(u, v):
        u, v = complex(u), complex(v)
        if abs(u) < 1e-300 or abs(v) < 1e-300:
            return abs(u - v)
        return abs(cmath.log(v / u))
    keep = dist(prev[0], new[0]) + dist(prev[1], new[1])
    swap = dist(prev[0], new[1]) + dist(prev[1], new[0])
    return list(new) if keep <= swap else [new[1], new[0]]


def trace_curve_to_infinity(comp: ComponentSpec, watched=DEFAULT_WATCHED,
                            radii: Sequence = (10, 100, 1000, 10000), phase: float = 0.0,
                            tol: float = RESIDUAL_TOL) -> list[list[CurveSample]]:
    """Follow both y-branches of C3 (x = z) as |z| grows; one sample list per branch."""
    if list(radii) != sorted(radii) or len(set(radii)) != len(radii):
        raise ValueError("radii must be strictly increasing")
    words = _watched_words(watched)
    polys = {name: reduce_trace(w, 2) for name, w in words.items()}
    branches: list[list[CurveSample]] = [[], []]
    prev = None
    for r in radii:
        if phase == 0.0:
            z = Fraction(r).limit_denominator(10 ** 12) if isinstance(r, float) else Fraction(r)
        else:
            z = complex(r) * cmath.exp(1j * phase)
        roots, (qa, qb, qc) = _branch_points(z)
        floats = [_as_complex(y) for y in roots]
        disc = complex(qb) ** 2 - 4 * complex(qa) * complex(qc)
        scale = abs(complex(qb)) ** 2 + abs(4 * complex(qa) * complex(qc)) + 1e-300
        order = [0, 1] if prev is None else [floats.index(v) for v in _match(prev, floats)]
        prev = [floats[k] for k in order]
        for label, k in enumerate(order):
            y = roots[k]
            pt = {"x": z, "y": y, "z": z}
            traces = {}
            for name, p in polys.items():
                traces[name] = _as_complex(p.eval(pt))
            fpt = {"x": complex(z), "y": floats[k], "z": complex(z)}
            residual = comp.residual(fpt)
            flagged, notes = False, []
            if abs(disc) < 1e-12 * scale:
                flagged = True
                notes.append("branch collision")
            if residual >= tol:
                flagged = True
                notes.append("residual above tolerance")
            if not all(math.isfinite(abs(v)) for v in traces.values()):
                flagged = True
                notes.append("overflow")
            branches[label].append(CurveSample(complex(z), CharPoint.make(fpt), traces,
                                               residual, label, flagged, "; ".join(notes)))
    return branches


def ideal_point_verdict(branches: Sequence[Sequence[CurveSample]], name: str = "l1",
                        target: complex = 2, threshold: float = 1e-2) -> dict:
    """Per branch: is |tr - target| strictly decreasing over the last three radii and small at the end."""
    out = []
    for b in branches:
        good = [s for s in b if not s.flagged]
        errs = [abs(s.traces[name] - target) for s in good]
        tail = errs[-3:]
        converges = (len(tail) == 3 and all(x > y for x, y in zip(tail, tail[1:]))
                     and tail[-1] < threshold)
        out.append({"branch": b[0].branch if b else None, "errors": errs, "converges": converges,
                    "flagged": sum(1 for s in b if s.flagged)})
    return {"branches": out, "any_converges": any(o["converges"] for o in out),
            "max_residual": max((s.residual for b in branches for s in b), default=0.0)}


# --- reducibility ------------------------------------------------------------

def reducibility_locus_check(point, basis: int = 2):
    """x^2 + y^2 + z^2 - xyz - 4 at a rank-2 point; zero exactly on reducible characters."""
    if basis != 2:
        raise ValueError("the reducibility polynomial is defined for rank-2 points")
    poly = reduce_trace(Word.gen("a").commutator(Word.gen("b")), 2) - 2
    values = point.as_dict() if isinstance(point, CharPoint) else dict(point)
    if any(isinstance(v, MultiPoly) for v in values.values()):
        return poly.subs(values)
    return poly.eval(values)
