from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from charvar.exact import (CycloNum, GaussRat, MultiPoly, PolyParseError, QuadExt,
                           cyclo_embed_and_trace, cyclotomic_coeffs, cyclotomic_polynomial,
                           euler_phi, poly_eval)

from .strategies import cyclonums, gaussrats, polys

CUBIC = MultiPoly.parse("x*y*z - x^2 - y^2")


# --- GaussRat ----------------------------------------------------------------

@given(gaussrats, gaussrats, gaussrats)
def test_gaussrat_ring_axioms(a, b, c):
    assert (a + b) - b == a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(gaussrats)
def test_gaussrat_inverse(a):
    if a:
        assert a * a.inverse() == 1


def test_gaussrat_lowest_terms():
    g = GaussRat(Fraction(4, -6), Fraction(3, 9))
    assert g.re == Fraction(-2, 3) and g.re.denominator > 0
    assert g.im == Fraction(1, 3)
    assert GaussRat(0, 1) ** 2 == -1


def test_gaussrat_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GaussRat(0).inverse()


# --- MultiPoly -----------------------------------------------------------------

@given(polys(), polys(), polys())
def test_poly_ring_axioms(p, q, r):
    assert (p + q) - q == p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p


@given(polys())
def test_poly_no_zero_terms(p):
    assert all(c for c in (p - p).terms.values())
    assert (p - p).is_zero()


@given(polys())
def test_poly_text_and_json_round_trip(p):
    assert MultiPoly.parse(p.to_text(), p.variables) == p
    assert MultiPoly.from_json(p.to_json()) == p


def test_poly_eval_examples():
    assert poly_eval(CUBIC, {"x": 0, "y": 0, "z": 5}) == 0
    assert poly_eval(CUBIC, {"x": 2, "y": 2, "z": 2}) == 0
    p = MultiPoly.parse("3*x^2 + y - 7")
    assert poly_eval(p, {"x": 0, "y": 0}) == p.constant_term() == -7


def test_poly_eval_float_matches_exact():
    p = MultiPoly.parse("x^3*y - 2*x*y^2 + 5")
    pt = {"x": Fraction(3, 7), "y": Fraction(-5, 2)}
    exact = p.eval(pt)
    approx = p.eval({k: float(v) for k, v in pt.items()})
    assert abs(complex(approx) - complex(exact)) < 1e-12


def test_poly_eval_missing_variable():
    with pytest.raises(ValueError, match="no value"):
        poly_eval(CUBIC, {"x": 1})


@pytest.mark.parametrize("text", ["x**", "x + * y", "x^-1", "(x"])
def test_poly_parse_errors(text):
    with pytest.raises(PolyParseError):
        MultiPoly.parse(text)


def test_poly_text_form():
    assert CUBIC.to_text() == "x*y*z - x^2 - y^2"


# --- cyclotomic polynomials ------------------------------------------------------

def test_cyclotomic_examples():
    assert cyclotomic_polynomial(1) == MultiPoly.parse("x - 1")
    assert cyclotomic_polynomial(4) == MultiPoly.parse("x^2 + 1")
    assert cyclotomic_polynomial(12) == MultiPoly.parse("x^4 - x^2 + 1")


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclotomic_product_reconstructs(n):
    x = MultiPoly.var("x")
    prod = MultiPoly.const(1)
    for d in range(1, n + 1):
        if n % d == 0:
            prod = prod * cyclotomic_polynomial(d)
    assert prod == x ** n - 1
    coeffs = cyclotomic_coeffs(n)
    assert coeffs[-1] == 1 and len(coeffs) - 1 == euler_phi(n)


# --- CycloNum --------------------------------------------------------------------

@given(cyclonums(), cyclonums(), cyclonums())
def test_cyclo_ring_axioms(a, b, c):
    assert (a + b) - b == a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(cyclonums())
def test_cyclo_inverse(a):
    if a:
        assert a * a.inverse() == 1


def test_cyclo_embedding_is_multiplicative():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 24)
        a, b = (CycloNum(n, [Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                             for _ in range(euler_phi(n))]) for _ in range(2))
        assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-12


def test_cyclo_unique_representation():
    z = CycloNum.zeta(6)
    # z^2 = z - 1 modulo x^2 - x + 1
    assert z * z == z - 1
    assert (z * z).coords == (Fraction(-1), Fraction(1))
    assert CycloNum.zeta(12, 12) == 1


def test_cyclo_embed_and_trace_examples():
    assert cyclo_embed_and_trace(1, 4)[1] == 0
    assert cyclo_embed_and_trace(1, 6)[1] == 1
    assert cyclo_embed_and_trace(1, 2)[0] == -1


@pytest.mark.parametrize("n,conductor", [(1, 5), (2, 7), (3, 12), (5, 18), (7, 24)])
def test_cyclo_trace_is_twice_cosine(n, conductor):
    _, tr = cyclo_embed_and_trace(n, conductor)
    for j in range(1, conductor):
        if math.gcd(j, conductor) == 1:
            assert abs(tr.embed(j) - 2 * math.cos(2 * math.pi * n * j / conductor)) < 1e-12


@pytest.mark.parametrize("bad", [0, -3, 2.5])
def test_cyclo_invalid_conductor(bad):
    with pytest.raises(ValueError):
        cyclo_embed_and_trace(1, bad)


def test_cyclo_mixed_conductors():
    a = CycloNum.zeta(4)
    b = CycloNum.zeta(6)
    s = a + b
    assert s.conductor == 12
    assert abs(complex(s) - (1j + cmath.exp(1j * math.pi / 3))) < 1e-12


@given(cyclonums(st.sampled_from([5, 8, 12])))
def test_cyclo_json_round_trip(a):
    assert CycloNum.from_json_obj(a.to_json_obj()) == a


# --- QuadExt ----------------------------------------------------------------------

def test_quadext_arithmetic():
    r = QuadExt.sqrt(3)
    assert r * r == 3
    q = QuadExt(1, 2, 5)
    assert q * q.inverse() == 1
    assert abs(float(q) - (1 + 2 * math.sqrt(5))) < 1e-12
    assert QuadExt(1, -1, 2).sign() == -1
