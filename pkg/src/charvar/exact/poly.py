"""Multivariate polynomials with Gaussian-rational coefficients.

Terms are kept in a dict keyed by exponent tuples aligned with ``variables``.
Zero coefficients are never stored. Printing and serialization use graded
lexicographic order (highest total degree first, ties broken lexicographically
on the exponent tuple).
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

from .gaussrat import GaussRat

Exps = tuple  # tuple[int, ...]

_EXACT_SCALARS = (int, Fraction, Rational, GaussRat)


def _grlex_key(exps: Exps):
    return (sum(exps), exps)


class MultiPoly:
    __slots__ = ("variables", "_terms", "_canon", "_arrays")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping | Iterable = ()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        n = len(variables)
        items = terms.items() if isinstance(terms, Mapping) else terms
        store: dict = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} does not match {n} variables")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponents are not allowed")
            c = GaussRat.coerce(c)
            if exps in store:
                c = store[exps] + c
            if c:
                store[exps] = c
            else:
                store.pop(exps, None)
        self.variables = variables
        self._terms = store
        self._canon = None
        self._arrays = None

    @classmethod
    def _from_clean(cls, variables: tuple, terms: dict) -> "MultiPoly":
        obj = object.__new__(cls)
        obj.variables = variables
        obj._terms = terms
        obj._canon = None
        obj._arrays = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, c, variables: Sequence[str] = ()) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "MultiPoly":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            variables = variables + (name,)
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls._from_clean(variables, {exps: GaussRat(1)})

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> "MultiPoly":
        return cls._from_clean(tuple(variables), {})

    # accessors --------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> Iterator:
        """Terms in graded lexicographic order, leading term first."""
        for exps in sorted(self._terms, key=_grlex_key, reverse=True):
            yield exps, self._terms[exps]

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> GaussRat:
        return self._terms.get((0,) * len(self.variables), GaussRat(0))

    def used_variables(self) -> tuple:
        used = [False] * len(self.variables)
        for exps in self._terms:
            for k, e in enumerate(exps):
                if e:
                    used[k] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree(self, name: str) -> int:
        if name not in self.variables:
            return 0 if self._terms else -1
        k = self.variables.index(name)
        return max((e[k] for e in self._terms), default=-1)

    def coefficients_in(self, name: str) -> dict:
        """Split as ``sum_k c_k * name^k``; returns ``{k: c_k}`` with ``c_k`` free of ``name``."""
        if name not in self.variables:
            return {0: self} if self._terms else {}
        k = self.variables.index(name)
        out: dict = {}
        for exps, c in self._terms.items():
            d = exps[k]
            stripped = exps[:k] + (0,) + exps[k + 1:]
            out.setdefault(d, {})[stripped] = c
        return {d: MultiPoly._from_clean(self.variables, t) for d, t in sorted(out.items())}

    # alignment --------------------------------------------------------
    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-express over ``variables``, which must contain every used variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        idx = []
        for k, v in enumerate(self.variables):
            if v in pos:
                idx.append((k, pos[v]))
        n = len(variables)
        terms = {}
        for exps, c in self._terms.items():
            new = [0] * n
            carried = 0
            for k, j in idx:
                new[j] = exps[k]
                carried += exps[k]
            if carried != sum(exps):
                missing = [v for v, e in zip(self.variables, exps) if e and v not in pos]
                raise ValueError(f"variables {missing} are used but not in {variables}")
            terms[tuple(new)] = c
        return MultiPoly._from_clean(variables, terms)

    def _aligned(self, other: "MultiPoly"):
        if self.variables == other.variables:
            return self.variables, self._terms, other._terms
        extra = tuple(v for v in other.variables if v not in self.variables)
        variables = self.variables + extra
        return variables, self.with_variables(variables)._terms, other.with_variables(variables)._terms

    def _coerce(self, other) -> "MultiPoly | None":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, _EXACT_SCALARS):
            return MultiPoly.const(other, self.variables)
        return None

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        variables, a, b = self._aligned(o)
        terms = dict(a)
        for exps, c in b.items():
            s = terms.get(exps)
            s = c if s is None else s + c
            if s:
                terms[exps] = s
            else:
                terms.pop(exps, None)
        return MultiPoly._from_clean(variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._from_clean(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, _EXACT_SCALARS):
            c = GaussRat.coerce(other)
            if not c:
                return MultiPoly.zero(self.variables)
            return MultiPoly._from_clean(self.variables, {e: v * c for e, v in self._terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        variables, a, b = self._aligned(other)
        terms: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                c = ca * cb
                s = terms.get(e)
                terms[e] = c if s is None else s + c
        return MultiPoly._from_clean(variables, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("division only by nonzero constants")
            other = other.constant_term()
        if not isinstance(other, _EXACT_SCALARS):
            return NotImplemented
        inv = GaussRat.coerce(other).inverse()
        return self * inv

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = MultiPoly.const(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # substitution and evaluation --------------------------------------
    def subs(self, mapping: Mapping[str, object]) -> "MultiPoly":
        """Exact composition: replace variables by polynomials or exact scalars."""
        targets = {}
        for name, value in mapping.items():
            if name not in self.variables:
                continue
            if isinstance(value, MultiPoly):
                targets[name] = value
            else:
                targets[name] = MultiPoly.const(value)
        keep = tuple(v for v in self.variables if v not in targets)
        out_vars = keep
        for p in targets.values():
            out_vars = out_vars + tuple(v for v in p.variables if v not in out_vars)
        kept_idx = [self.variables.index(v) for v in keep]
        sub_idx = [(self.variables.index(v), p.with_variables(out_vars)) for v, p in targets.items()]
        power_cache: dict = {}

        def power(j, p, e):
            key = (j, e)
            if key not in power_cache:
                power_cache[key] = p ** e
            return power_cache[key]

        result = MultiPoly.zero(out_vars)
        n_out = len(out_vars)
        for exps, c in self._terms.items():
            mono = [0] * n_out
            for i, k in enumerate(kept_idx):
                mono[i] = exps[k]
            term = MultiPoly._from_clean(out_vars, {tuple(mono): c})
            for j, p in sub_idx:
                if exps[j]:
                    term = term * power(j, p, exps[j])
            result = result + term
        return result

    def __call__(self, point: Mapping[str, object] | None = None, **kwargs):
        pt = dict(point or {})
        pt.update(kwargs)
        return self.eval(pt)

    def eval(self, point: Mapping[str, object]):
        """Evaluate at ``point``.

        Exact inputs (int, Fraction, GaussRat) give an exact GaussRat. Any
        float/complex input switches to double precision with compensated
        summation. Other ring elements (CycloNum, QuadExt, MultiPoly, ...)
        are combined with their own arithmetic.
        """
        used = self.used_variables()
        missing = [v for v in used if v not in point]
        if missing:
            raise ValueError(f"no value given for variable(s) {missing}")
        values = [point.get(v, 0) for v in self.variables]
        if all(isinstance(v, _EXACT_SCALARS) for v in values):
            return self._eval_exact([GaussRat.coerce(v) for v in values])
        if all(isinstance(v, (int, float, complex, Fraction, GaussRat)) or _is_numpy_number(v)
               for v in values):
            from .. import kernels
            exps, coeffs = self.float_arrays()
            pts = [[complex(v) for v in values]]
            return complex(kernels.eval_poly_batch(exps, coeffs, pts)[0])
        return self._eval_generic(values)

    def _eval_exact(self, values: list) -> GaussRat:
        cache: dict = {}
        total = GaussRat(0)
        for exps, c in self._terms.items():
            term = c
            for k, e in enumerate(exps):
                if e:
                    key = (k, e)
                    if key not in cache:
                        cache[key] = values[k] ** e
                    term = term * cache[key]
            total = total + term
        return total

    def _eval_generic(self, values: list):
        cache: dict = {}
        total = None
        for exps, c in self._terms.items():
            term = None
            for k, e in enumerate(exps):
                if e:
                    key = (k, e)
                    if key not in cache:
                        cache[key] = values[k] ** e
                    term = cache[key] if term is None else term * cache[key]
            coeff = c.re if c.is_real() else c
            term = coeff if term is None else term * coeff
            total = term if total is None else total + term
        if total is None:
            return 0
        return total

    def eval_batch(self, points):
        """Double-precision evaluation at many points (rows ordered like ``variables``)."""
        from .. import kernels
        exps, coeffs = self.float_arrays()
        return kernels.eval_poly_batch(exps, coeffs, points)

    def float_arrays(self):
        if self._arrays is None:
            import numpy as np
            exps = np.array([e for e, _ in self.items()], dtype=np.int64).reshape(-1, len(self.variables))
            coeffs = np.array([complex(c) for _, c in self.items()], dtype=np.complex128)
            self._arrays = (exps, coeffs)
        return self._arrays

    def abs_term_sum(self, point: Mapping[str, complex]) -> float:
        """Sum of absolute term values; the natural scale for a normalized residual."""
        values = [complex(point.get(v, 0)) for v in self.variables]
        total = 0.0
        for exps, c in self._terms.items():
            t = abs(complex(c))
            for k, e in enumerate(exps):
                if e:
                    t *= abs(values[k]) ** e
            total += t
        return total

    # equality ---------------------------------------------------------
    def canonical(self) -> frozenset:
        if self._canon is None:
            vs = self.variables
            self._canon = frozenset(
                (tuple((vs[k], e) for k, e in enumerate(exps) if e), c)
                for exps, c in self._terms.items()
            )
        return self._canon

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.canonical() == other.canonical()
        if isinstance(other, _EXACT_SCALARS):
            if not other:
                return not self._terms
            return self.is_constant() and len(self._terms) == 1 and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.canonical())

    # text and JSON ----------------------------------------------------
    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            )
            neg = False
            if c.is_real():
                neg = c.re < 0
                mag = GaussRat(abs(c.re))
                cstr = "" if (mag == 1 and mono) else str(mag)
            elif not c.re:
                neg = c.im < 0
                mag = GaussRat(0, abs(c.im))
                cstr = str(mag)
                if mag == GaussRat(0, 1) and mono:
                    cstr = "I"
            else:
                cstr = f"({c})"
            if cstr and mono:
                body = f"{cstr}*{mono}"
            else:
                body = cstr or mono
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    __str__ = to_text

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r}, variables={self.variables!r})"

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] | None = None) -> "MultiPoly":
        return _Parser(text, variables).parse()

    def to_json_obj(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [[list(e), c.to_pair()] for e, c in self.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "MultiPoly":
        return cls(obj["variables"], [(tuple(e), GaussRat.from_pair(c)) for e, c in obj["terms"]])

    @classmethod
    def from_json(cls, text: str) -> "MultiPoly":
        return cls.from_json_obj(json.loads(text))


def _is_numpy_number(v) -> bool:
    return type(v).__module__ == "numpy"


# --- text parser -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\*\*|[-+*/^()]))")


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    def __init__(self, text: str, variables):
        self.text = text
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise PolyParseError(f"unexpected character {text[pos]!r}", pos)
            kind = "num" if m.group(1) else "name" if m.group(2) else "op"
            val = m.group(1) or m.group(2) or m.group(3)
            if val == "**":
                val = "^"
            self.tokens.append((kind, val, m.start(m.lastindex)))
            pos = m.end()
        self.i = 0
        self.variables = tuple(variables) if variables is not None else ()
        self._seen = list(self.variables)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> MultiPoly:
        if not self.tokens:
            raise PolyParseError("empty expression", 0)
        p = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise PolyParseError(f"unexpected token {val!r}", pos)
        return p.with_variables(tuple(self._seen))

    def expr(self) -> MultiPoly:
        p = self.term()
        while self.peek()[1] in ("+", "-"):
            _, op, _ = self.take()
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> MultiPoly:
        p = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise PolyParseError("division by a non-constant or zero", pos)
                p = p / q.constant_term()
        return p

    def unary(self) -> MultiPoly:
        if self.peek()[1] in ("-", "+"):
            _, op, _ = self.take()
            p = self.unary()
            return -p if op == "-" else p
        return self.power()

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise PolyParseError("exponent must be a nonnegative integer", pos)
            return base ** int(val)
        return base

    def atom(self) -> MultiPoly:
        kind, val, pos = self.take()
        if kind == "num":
            return MultiPoly.const(int(val))
        if kind == "name":
            if val == "I":
                return MultiPoly.const(GaussRat(0, 1))
            if val not in self._seen:
                self._seen.append(val)
            return MultiPoly.var(val)
        if val == "(":
            p = self.expr()
            k2, v2, p2 = self.take()
            if v2 != ")":
                raise PolyParseError("expected ')'", p2)
            return p
        raise PolyParseError(f"unexpected token {val!r}", pos)
