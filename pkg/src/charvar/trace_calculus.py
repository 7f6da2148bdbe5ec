"""Trace polynomials of free-group words in Fricke coordinates.

Rank 2 uses x = tr a, y = tr b, z = tr ab. Rank 3 uses x1, x2, x3, x12,
x13, x23, x123 (traces of a, b, c, ab, ac, bc, abc); the trace of acb is
the dependent coordinate x132 = P - x123, where x123 and x132 are the two
roots of lambda^2 - P*lambda + Q.

Rewrite rules, with W the rest of a cyclic word and g a generator:

    tr(W g^k)    = tr g * tr(W g^(k-1)) - tr(W g^(k-2))     k >= 2
    tr(W g^-1)   = tr g * tr W - tr(W g)
    tr(W g^k)    = tr g * tr(W g^(k+1)) - tr(W g^(k+2))     k <= -2
    tr(g U g V)  = tr(gU) * tr(gV) - tr(U V^-1)

Each rewrite lowers (letter count, number of inverse letters) in the
lexicographic order, so the memoized recursion terminates.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .exact.poly import MultiPoly
from .words import ParseError, Word, parse_word

__all__ = [
    "FrickeBasis", "TraceEngine", "Presentation", "Peripheral", "ParseError", "Word",
    "parse_word", "reduce_trace", "goldman_quadratic", "puncture_identity",
    "fricke_values", "load_presentation",
]

RANK2_VARS = ("x", "y", "z")
RANK3_VARS = ("x1", "x2", "x3", "x12", "x13", "x23", "x123")
X132 = "x132"


@dataclass(frozen=True)
class FrickeBasis:
    rank: int
    generators: tuple = ()

    def __post_init__(self):
        if self.rank not in (2, 3):
            raise NotImplementedError(f"trace reduction is unsupported for rank {self.rank}")
        gens = tuple(self.generators) or (("a", "b") if self.rank == 2 else ("a", "b", "c"))
        if len(gens) != self.rank:
            raise ValueError(f"rank {self.rank} needs {self.rank} generator names, got {gens}")
        object.__setattr__(self, "generators", gens)

    @property
    def variables(self) -> tuple:
        return RANK2_VARS if self.rank == 2 else RANK3_VARS

    def reference_words(self) -> dict:
        """Coordinate name -> word whose trace it is (rank 3 includes x132)."""
        g = self.generators
        if self.rank == 2:
            a, b = g
            return {"x": Word.gen(a), "y": Word.gen(b), "z": Word([(a, 1), (b, 1)])}
        a, b, c = g
        w = lambda *s: Word([(n, 1) for n in s])  # noqa: E731
        return {"x1": w(a), "x2": w(b), "x3": w(c), "x12": w(a, b), "x13": w(a, c),
                "x23": w(b, c), "x123": w(a, b, c), X132: w(a, c, b)}


# --- integer polynomials on a fixed variable tuple -----------------------------

def _padd(p: dict, q: dict, s: int = 1) -> dict:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + s * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _pmul(p: dict, q: dict) -> dict:
    out: dict = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _canonical(syl: tuple) -> tuple:
    """Rotation of the word or its inverse with fewest inverse letters, then smallest."""
    if len(syl) <= 1:
        if syl and syl[0][1] < 0:
            return ((syl[0][0], -syl[0][1]),)
        return syl
    inv = tuple((g, -e) for g, e in reversed(syl))
    best = None
    for s in (syl, inv):
        negs = sum(-e for _, e in s if e < 0)
        for i in range(len(s)):
            r = (negs, s[i:] + s[:i])
            if best is None or r < best:
                best = r
    return best[1]


def _cyc(letters) -> tuple:
    """Free and cyclic reduction of (gen index, exponent) pairs into syllables."""
    stack: list = []
    for g, e in letters:
        if not e:
            continue
        if stack and stack[-1][0] == g:
            stack[-1][1] += e
            if not stack[-1][1]:
                stack.pop()
        else:
            stack.append([g, e])
    while len(stack) > 1 and stack[0][0] == stack[-1][0]:
        g, e = stack[0][0], stack[0][1] + stack[-1][1]
        stack = stack[1:-1]
        if e:
            stack.insert(0, [g, e])
    return tuple((g, e) for g, e in stack)


class TraceEngine:
    """Memoized trace reduction for one basis.

    ``raw=True`` (rank 3 only) keeps x123 and x132 as independent symbols with
    no quadratic reduction; it is used to derive P and Q. ``rng`` shuffles the
    choice among applicable rewrites, which must not change any result.
    """

    def __init__(self, basis: FrickeBasis, raw: bool = False, rng: random.Random | None = None):
        self.basis = basis
        self.raw = raw and basis.rank == 3
        self.rng = rng
        self.index = {g: i for i, g in enumerate(basis.generators)}
        self.vars = basis.variables + ((X132,) if self.raw else ())
        self.nv = len(self.vars)
        self.memo: dict = {}
        self._one = {(0,) * self.nv: 1}
        self._base: dict = {}
        for name, w in basis.reference_words().items():
            key = _canonical(self._syllables(w))
            if name == X132:
                self._acb_key = key
                continue
            self._base[key] = self._var(name)
        self._x123 = self.vars.index("x123") if basis.rank == 3 else None
        self._P = self._Q = None
        if basis.rank == 3 and not self.raw:
            P, Q = _goldman_raw(basis)
            self._P = self._from_multipoly(P)
            self._Q = self._from_multipoly(Q)

    # conversions ------------------------------------------------------
    def _var(self, name: str) -> dict:
        e = [0] * self.nv
        e[self.vars.index(name)] = 1
        return {tuple(e): 1}

    def _syllables(self, w: Word) -> tuple:
        try:
            return _cyc((self.index[g], e) for g, e in w.letters)
        except KeyError as exc:
            raise ValueError(f"generator {exc.args[0]!r} is not in basis {self.basis.generators}") from None

    def _from_multipoly(self, p: MultiPoly) -> dict:
        q = p.with_variables(self.vars)
        out = {}
        for e, c in q.terms.items():
            if not c.is_real() or c.re.denominator != 1:
                raise ValueError("expected an integer polynomial")
            out[e] = int(c.re)
        return out

    def to_multipoly(self, p: dict) -> MultiPoly:
        return MultiPoly(self.vars, p)

    # reduction --------------------------------------------------------
    def _mul(self, p: dict, q: dict) -> dict:
        r = _pmul(p, q)
        if self._P is not None:
            r = self._fold_x123(r)
        return r

    def _fold_x123(self, p: dict) -> dict:
        k = self._x123
        out: dict = {}
        pending = list(p.items())
        while pending:
            e, c = pending.pop()
            if e[k] < 2:
                v = out.get(e, 0) + c
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
                continue
            # x123^2 = P*x123 - Q
            base = e[:k] + (e[k] - 2,) + e[k + 1:]
            for pe, pc in self._P.items():
                ne = tuple(a + b for a, b in zip(base, pe))
                ne = ne[:k] + (ne[k] + 1,) + ne[k + 1:]
                pending.append((ne, c * pc))
            for qe, qc in self._Q.items():
                ne = tuple(a + b for a, b in zip(base, qe))
                pending.append((ne, -c * qc))
        return out

    def trace(self, w: Word) -> dict:
        return self._trace(self._syllables(w))

    def _trace(self, syl: tuple) -> dict:
        key = _canonical(syl)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = self._compute(key)
        self.memo[key] = result
        return result

    def _gen_trace(self, g: int) -> dict:
        return self._base[((g, 1),)]

    def _compute(self, syl: tuple) -> dict:
        if not syl:
            return {(0,) * self.nv: 2}
        if syl in self._base:
            return self._base[syl]
        if self.basis.rank == 3 and syl == self._acb_key:
            if self.raw:
                return self._var(X132)
            return _padd(self._P, self._var("x123"), -1)
        if len(syl) == 1:
            g, k = syl[0]
            k = abs(k)
            # Chebyshev recursion on powers of one generator
            t = self._gen_trace(g)
            prev, cur = {(0,) * self.nv: 2}, t
            for _ in range(k - 1):
                prev, cur = cur, _padd(self._mul(t, cur), prev, -1)
            return cur
        negs = [i for i, (_, e) in enumerate(syl) if e < 0]
        if negs:
            return self._power_rule(syl, self._choose(negs))
        powers = [i for i, (_, e) in enumerate(syl) if e > 1]
        if powers:
            return self._power_rule(syl, self._choose(powers))
        return self._split(syl)

    def _choose(self, options: list):
        if self.rng is None or len(options) == 1:
            return options[0]
        return self.rng.choice(options)

    def _power_rule(self, syl: tuple, i: int) -> dict:
        rot = syl[i + 1:] + syl[:i + 1]
        W, (g, k) = rot[:-1], rot[-1]
        tg = self._gen_trace(g)
        if k == -1:
            a = self._trace(_cyc(W))
            b = self._trace(_cyc(W + ((g, 1),)))
        elif k >= 2:
            a = self._trace(_cyc(W + ((g, k - 1),)))
            b = self._trace(_cyc(W + ((g, k - 2),)))
        else:
            a = self._trace(_cyc(W + ((g, k + 1),)))
            b = self._trace(_cyc(W + ((g, k + 2),)))
        return _padd(self._mul(tg, a), b, -1)

    def _split(self, syl: tuple) -> dict:
        letters = [g for g, _ in syl]
        positions: dict = {}
        for i, g in enumerate(letters):
            positions.setdefault(g, []).append(i)
        repeated = sorted(g for g, p in positions.items() if len(p) >= 2)
        if not repeated:
            raise AssertionError(f"irreducible positive word {syl} is not a basis word")
        if self.rng is None:
            g = repeated[-1]
            i, j = positions[g][0], positions[g][1]
        else:
            g = self.rng.choice(repeated)
            i, j = sorted(self.rng.sample(positions[g], 2))
        rot = letters[i:] + letters[:i]
        j -= i
        gU = tuple((h, 1) for h in rot[:j])
        gV = tuple((h, 1) for h in rot[j:])
        U = rot[1:j]
        V = rot[j + 1:]
        UVinv = tuple((h, 1) for h in U) + tuple((h, -1) for h in reversed(V))
        a = self._trace(_cyc(gU))
        b = self._trace(_cyc(gV))
        c = self._trace(_cyc(UVinv))
        return _padd(self._mul(a, b), c, -1)


# --- public operations ---------------------------------------------------------

def reduce_trace(w: Word | str, basis: FrickeBasis | int = 2, rng: random.Random | None = None,
                 engine: TraceEngine | None = None) -> MultiPoly:
    """Trace of ``w`` as a polynomial in the Fricke coordinates of ``basis``."""
    if isinstance(basis, int):
        basis = FrickeBasis(basis)
    if isinstance(w, str):
        w = parse_word(w, basis.generators)
    if engine is None:
        engine = TraceEngine(basis, rng=rng)
    return engine.to_multipoly(engine.trace(w))


_GOLDMAN_CACHE: dict = {}


def _goldman_raw(basis: FrickeBasis):
    key = basis.generators
    if key in _GOLDMAN_CACHE:
        return _GOLDMAN_CACHE[key]
    eng = TraceEngine(basis, raw=True)
    a, b, c = (Word.gen(g) for g in basis.generators)
    # Two reduction routes for tr(a c^-1 b^-1) must agree: expanding the
    # letter c^-1 ends in x132, expanding a^-1 in the inverse word b c a^-1
    # ends in x123. Their difference gives x123 + x132 in the six coordinates.
    w = eng._syllables(a * c.inverse() * b.inverse())
    route_c = eng._power_rule(w, 1)
    route_a = eng._power_rule(eng._syllables(b * c * a.inverse()), 2)
    P = _padd(_padd(route_a, route_c, -1), _padd(eng._var("x123"), eng._var(X132)))
    # tr(abc) tr(acb) = tr(abc acb) + tr(abc b^-1 c^-1 a^-1)
    Q = _padd(eng.trace(a * b * c * a * c * b), eng.trace(b * c * b.inverse() * c.inverse()))
    P, Q = eng.to_multipoly(P), eng.to_multipoly(Q)
    for name, poly in (("P", P), ("Q", Q)):
        if {"x123", X132} & set(poly.used_variables()):
            raise ArithmeticError(f"{name} still depends on x123/x132: {poly}")
    six = RANK3_VARS[:6]
    P, Q = P.with_variables(six), Q.with_variables(six)
    _GOLDMAN_CACHE[key] = (P, Q)
    return P, Q


def goldman_quadratic(basis: FrickeBasis | None = None) -> tuple[MultiPoly, MultiPoly]:
    """(P, Q) in x1..x23 with x123 + x132 = P and x123 * x132 = Q."""
    basis = basis or FrickeBasis(3)
    if basis.rank != 3:
        raise ValueError("the Goldman quadratic needs a rank-3 basis")
    return _goldman_raw(basis)


def puncture_identity(basis: FrickeBasis | None = None) -> MultiPoly:
    """tr(b c^-1) - tr(a b a^-1 c^-1) in Fricke coordinates."""
    basis = basis or FrickeBasis(3)
    if basis.rank != 3:
        raise ValueError("the puncture identity needs a rank-3 basis")
    a, b, c = (Word.gen(g) for g in basis.generators)
    eng = TraceEngine(basis)
    lhs = eng.trace(b * c.inverse())
    rhs = eng.trace(a * b * a.inverse() * c.inverse())
    return eng.to_multipoly(_padd(lhs, rhs, -1))


def fricke_values(basis: FrickeBasis, mats: Mapping[str, np.ndarray] | Sequence[np.ndarray]) -> dict:
    """Numeric Fricke coordinates (including x132 for rank 3) of concrete matrices."""
    if not isinstance(mats, Mapping):
        mats = dict(zip(basis.generators, mats))
    out = {}
    for name, w in basis.reference_words().items():
        m = np.eye(2, dtype=complex)
        for g, e in w.letters:
            m = m @ np.linalg.matrix_power(np.asarray(mats[g], dtype=complex), e)
        out[name] = complex(m[0, 0] + m[1, 1])
    return out


# --- presentations ---------------------------------------------------------------

@dataclass(frozen=True)
class Peripheral:
    torus: str
    meridian: Word
    longitude: Word


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple = ()
    peripherals: tuple = ()
    fiber: Word | None = None
    extra: dict = field(default_factory=dict)

    def to_json_obj(self) -> dict:
        obj = {
            "generators": list(self.generators),
            "relators": [str(r) for r in self.relators],
            "peripherals": [{"torus": p.torus, "meridian": str(p.meridian),
                             "longitude": str(p.longitude)} for p in self.peripherals],
        }
        if self.fiber is not None:
            obj["fiber"] = str(self.fiber)
        return obj


def presentation_from_obj(obj: Mapping) -> Presentation:
    gens = tuple(obj["generators"])
    if len(set(gens)) != len(gens):
        raise ValueError("duplicate generator names")

    def word(text, where):
        try:
            return parse_word(text, gens)
        except ParseError as exc:
            raise ParseError(f"{where}: {exc.args[0]}", exc.position, text) from None

    relators = tuple(word(r, f"relator {k}") for k, r in enumerate(obj.get("relators", [])))
    peris = tuple(
        Peripheral(str(p.get("torus", f"T{k}")), word(p["meridian"], f"peripheral {k} meridian"),
                   word(p["longitude"], f"peripheral {k} longitude"))
        for k, p in enumerate(obj.get("peripherals", []))
    )
    fiber = word(obj["fiber"], "fiber") if obj.get("fiber") else None
    return Presentation(gens, relators, peris, fiber)


def load_presentation(path: str | Path) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return presentation_from_obj(json.load(fh))
