"""Exact coefficient rings: Gaussian rationals, polynomials, cyclotomic and quadratic fields."""

from __future__ import annotations

from .cyclo import CycloNum, cyclo_embed_and_trace, cyclotomic_coeffs, cyclotomic_polynomial, euler_phi
from .gaussrat import I, GaussRat
from .poly import MultiPoly, PolyParseError
from .quadext import QuadExt


def poly_eval(p: MultiPoly, point):
    """Evaluate ``p`` at a name -> value mapping (exact or floating)."""
    return p.eval(point)


__all__ = [
    "CycloNum", "GaussRat", "I", "MultiPoly", "PolyParseError", "QuadExt",
    "cyclo_embed_and_trace", "cyclotomic_coeffs", "cyclotomic_polynomial",
    "euler_phi", "poly_eval",
]
