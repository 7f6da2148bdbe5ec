"""Sign matching across the tori of a JSJ line graph.

Each piece contributes an affine space of boundary sign characters
(base bits plus the span of its twist vectors; bit 1 means trace -2).
A gluing matrix Phi sends (meridian, longitude) coordinates of the
outgoing torus to those of the incoming torus, so identified classes
agree in sign exactly when s_from = s_to * Phi over GF(2). The solver
assembles these equations for all edges and eliminates.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from . import gf2
from .klein_bundle import build_rep, klein_presentation
from .seifert_holonomy import (
    SignLiftReport,
    annulus_cone_report,
    declared_report,
    disk_cone_case_table,
    report_from_images,
)

KINDS = ("DiskCone", "AnnulusCone", "Hyperbolic", "KleinBundle", "Custom")
KLEIN_FAMILIES = ("A", "B")


class GraphError(ValueError):
    """Malformed graph: not a line, wrong torus counts, or a bad gluing matrix."""


@dataclass(frozen=True)
class Vertex:
    kind: str
    params: dict = field(default_factory=dict)
    reports: tuple = ()  # one report, or one per Klein family

    @property
    def tori(self) -> int:
        return self.reports[0].tori

    def to_json_obj(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params)}


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    matrix: tuple  # ((a, b), (c, d)) integers

    def mod2(self) -> list[list[int]]:
        return [[x & 1 for x in row] for row in self.matrix]


@dataclass(frozen=True)
class JsjGraph:
    vertices: tuple
    edges: tuple

    def __post_init__(self):
        n = len(self.vertices)
        if n < 1:
            raise GraphError("graph has no vertices")
        if len(self.edges) != n - 1:
            raise GraphError(f"a line on {n} vertices has {n - 1} edges, got {len(self.edges)}")
        for k, e in enumerate(sorted(self.edges, key=lambda e: e.source)):
            if (e.source, e.target) != (k, k + 1):
                raise GraphError(f"edge {e.source}->{e.target} breaks the line order")
        for i, v in enumerate(self.vertices):
            want = 0 if n == 1 else (1 if i in (0, n - 1) else 2)
            if v.tori != want:
                raise GraphError(f"vertex {i} ({v.kind}) has {v.tori} boundary tori, expected {want}")
        for e in self.edges:
            (a, b), (c, d) = e.matrix
            if a * d - b * c not in (1, -1):
                raise GraphError(f"gluing matrix {e.matrix} on edge {e.source}->{e.target} "
                                 "has determinant outside {1, -1}")

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=lambda e: e.source)

    def to_json_obj(self) -> dict:
        return {"vertices": [v.to_json_obj() for v in self.vertices],
                "edges": [{"from": e.source, "to": e.target, "matrix": [list(r) for r in e.matrix]}
                          for e in self.sorted_edges()]}


# --- building vertices -------------------------------------------------------

def _report_from_obj(obj: Mapping) -> SignLiftReport:
    if "base" in obj:
        base = tuple(int(x) & 1 for x in obj["base"])
        twists = tuple(tuple(int(x) & 1 for x in t) for t in obj.get("twists", []))
        if len(base) % 2 or any(len(t) != len(base) for t in twists):
            raise GraphError("custom report needs 2 bits per torus in base and twists")
        return SignLiftReport(obj.get("h1_dim"), len(base) // 2, base_bits=base, twists=twists,
                              declared=True)
    return declared_report(int(obj["tori"]), obj["kernel"], obj.get("kernel_signs"),
                           obj.get("h1_dim"))


def make_vertex(kind: str, params: Mapping | None = None, report: Mapping | None = None) -> Vertex:
    params = dict(params or {})
    if kind not in KINDS:
        raise GraphError(f"unknown piece kind {kind!r}; choose from {KINDS}")
    if report is not None:
        reports = (_report_from_obj(report),)
    elif kind == "DiskCone":
        res = disk_cone_case_table(int(params["p"]), int(params["q"]), int(params.get("r1", 1)),
                                   int(params.get("r2", 1)), params.get("model", "fuchsian"))
        reports = (res.report,)
    elif kind == "AnnulusCone":
        reports = (annulus_cone_report(int(params["r"]), int(params.get("beta", 1))),)
    elif kind == "KleinBundle":
        pres = klein_presentation()
        reports = tuple(report_from_images(pres, build_rep(f, (1,), r=1).images())
                        for f in KLEIN_FAMILIES)
    else:
        raise GraphError(f"{kind} vertices need an explicit report")
    return Vertex(kind, params, reports)


def graph_from_obj(obj: Mapping) -> JsjGraph:
    try:
        vertices = tuple(make_vertex(v["kind"], v.get("params"), v.get("report"))
                         for v in obj["vertices"])
        edges = tuple(Edge(int(e["from"]), int(e["to"]),
                           tuple(tuple(int(x) for x in row) for row in e["matrix"]))
                      for e in obj["edges"])
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph description: {exc!r}") from None
    for e in edges:
        if len(e.matrix) != 2 or any(len(r) != 2 for r in e.matrix):
            raise GraphError(f"gluing matrix on edge {e.source}->{e.target} is not 2x2")
    return JsjGraph(vertices, edges)


def load_graph(path: str | Path) -> JsjGraph:
    with open(path, encoding="utf-8") as fh:
        return graph_from_obj(json.load(fh))


# --- interior classification -------------------------------------------------

def classify_interior_piece(report: SignLiftReport) -> str:
    """Type1 when the boundary kernel has one class in each torus, else Type3."""
    if report.tori != 2:
        raise ValueError(f"interior pieces have two boundary tori, got {report.tori}")
    kernel = [list(k) for k in report.kernel]
    dim = gf2.rank(kernel, 4) if kernel else 0
    if dim != 2:
        raise ValueError(f"boundary kernel has dimension {dim}, expected 2")
    first = [v for v in _span(kernel) if any(v[:2]) and not any(v[2:])]
    second = [v for v in _span(kernel) if any(v[2:]) and not any(v[:2])]
    return "Type1" if first and second else "Type3"


def _span(basis: Sequence[Sequence[int]]) -> list[list[int]]:
    out = []
    for coeffs in itertools.product((0, 1), repeat=len(basis)):
        v = [0] * len(basis[0])
        for c, b in zip(coeffs, basis):
            if c:
                v = [x ^ y for x, y in zip(v, b)]
        if any(v):
            out.append(v)
    return out


# --- solving -----------------------------------------------------------------

def _torus_slots(g: JsjGraph, edge: Edge) -> tuple[int, int]:
    """Torus index used by the edge on its source and target vertex."""
    src = 0 if edge.source == 0 else 1
    return src, 0


@dataclass(frozen=True)
class SignAssignment:
    families: dict      # vertex index -> Klein family
    lifts: dict         # vertex index -> twist coefficients
    boundary: dict      # vertex index -> boundary bits (m0, l0, m1, l1...)
    edges: tuple        # per edge: {"from_signs": ..., "to_signs": ...}

    def to_json_obj(self) -> dict:
        return {"satisfiable": True,
                "families": {str(k): v for k, v in sorted(self.families.items())},
                "lifts": {str(k): list(v) for k, v in sorted(self.lifts.items())},
                "boundary_bits": {str(k): list(v) for k, v in sorted(self.boundary.items())},
                "edges": list(self.edges)}


@dataclass(frozen=True)
class Unsatisfiable:
    conflict: tuple  # edges (source, target) of a minimal conflicting set

    def to_json_obj(self) -> dict:
        return {"satisfiable": False,
                "conflicting_edges": [{"from": s, "to": t} for s, t in self.conflict]}


def _family_choices(g: JsjGraph):
    klein = [i for i, v in enumerate(g.vertices) if v.kind == "KleinBundle" and len(v.reports) > 1]
    for combo in itertools.product(range(len(KLEIN_FAMILIES)), repeat=len(klein)):
        yield dict(zip(klein, combo))


def _report(g: JsjGraph, i: int, choice: Mapping[int, int]) -> SignLiftReport:
    return g.vertices[i].reports[choice.get(i, 0)]


def _system(g: JsjGraph, choice: Mapping[int, int], edges: Sequence[Edge]):
    """Rows and rhs of the GF(2) system in the stacked twist coefficients."""
    offsets, total = {}, 0
    for i in range(len(g.vertices)):
        offsets[i] = total
        total += len(_report(g, i, choice).twists)
    rows, rhs = [], []
    for e in edges:
        rs, rt = _report(g, e.source, choice), _report(g, e.target, choice)
        ts, tt = _torus_slots(g, e)
        phi = e.mod2()
        # s_from[j] + sum_k s_to[k] phi[k][j] = 0 for j in (m, l)
        for j in range(2):
            row = [0] * total
            b = rs.base_bits[2 * ts + j]
            for idx, tw in enumerate(rs.twists):
                row[offsets[e.source] + idx] ^= tw[2 * ts + j]
            for k in range(2):
                if phi[k][j]:
                    b ^= rt.base_bits[2 * tt + k]
                    for idx, tw in enumerate(rt.twists):
                        row[offsets[e.target] + idx] ^= tw[2 * tt + k]
            rows.append(row)
            rhs.append(b)
    return rows, rhs, offsets, total


def _boundary_bits(rep: SignLiftReport, coeffs: Sequence[int]) -> tuple:
    v = list(rep.base_bits)
    for c, t in zip(coeffs, rep.twists):
        if c:
            v = [x ^ y for x, y in zip(v, t)]
    return tuple(v)


def _edge_report(g: JsjGraph, e: Edge, bits: Mapping[int, tuple]) -> dict:
    ts, tt = _torus_slots(g, e)
    sgn = lambda b: -1 if b else 1  # noqa: E731
    return {"from": e.source, "to": e.target,
            "from_signs": {"m": sgn(bits[e.source][2 * ts]), "l": sgn(bits[e.source][2 * ts + 1])},
            "to_signs": {"m": sgn(bits[e.target][2 * tt]), "l": sgn(bits[e.target][2 * tt + 1])}}


def _solve_with(g: JsjGraph, choice: Mapping[int, int], edges: Sequence[Edge]):
    rows, rhs, offsets, total = _system(g, choice, edges)
    if not rows:
        return [0] * total, offsets
    x = gf2.solve(rows, rhs, total)
    return (x, offsets) if x is not None else (None, offsets)


def solve_compatibility(g: JsjGraph) -> SignAssignment | Unsatisfiable:
    """Lifts whose trace signs agree on every glued torus, Klein pieces restricted to A/B."""
    edges = g.sorted_edges()
    for choice in _family_choices(g):
        x, offsets = _solve_with(g, choice, edges)
        if x is None:
            continue
        lifts, bits, fams = {}, {}, {}
        for i, v in enumerate(g.vertices):
            rep = _report(g, i, choice)
            coeffs = tuple(x[offsets[i]: offsets[i] + len(rep.twists)])
            lifts[i] = coeffs
            bits[i] = _boundary_bits(rep, coeffs)
            if v.kind == "KleinBundle":
                fams[i] = KLEIN_FAMILIES[choice.get(i, 0)]
        assignment = SignAssignment(fams, lifts, bits, tuple(_edge_report(g, e, bits) for e in edges))
        if not check_assignment(g, assignment):
            raise ArithmeticError("solver produced an assignment failing the edge check")
        return assignment
    return Unsatisfiable(_minimal_conflict(g, edges))


def _minimal_conflict(g: JsjGraph, edges: Sequence[Edge]) -> tuple:
    for size in range(1, len(edges) + 1):
        for subset in itertools.combinations(edges, size):
            if all(_solve_with(g, c, subset)[0] is None for c in _family_choices(g)):
                return tuple((e.source, e.target) for e in subset)
    return tuple((e.source, e.target) for e in edges)


def check_assignment(g: JsjGraph, a: SignAssignment) -> bool:
    """Independent check: every nonzero class on each glued torus has the sign of its image."""
    for i, v in enumerate(g.vertices):
        fam = a.families.get(i)
        rep = v.reports[KLEIN_FAMILIES.index(fam)] if fam else v.reports[0]
        if tuple(a.boundary[i]) not in set(rep.achievable()):
            return False
    for e in g.sorted_edges():
        ts, tt = _torus_slots(g, e)
        src = a.boundary[e.source][2 * ts: 2 * ts + 2]
        dst = a.boundary[e.target][2 * tt: 2 * tt + 2]
        for alpha, beta in ((1, 0), (0, 1), (1, 1)):
            img = [e.matrix[0][0] * alpha + e.matrix[0][1] * beta,
                   e.matrix[1][0] * alpha + e.matrix[1][1] * beta]
            s_from = (src[0] * alpha + src[1] * beta) % 2
            s_to = (dst[0] * img[0] + dst[1] * img[1]) % 2
            if s_from != s_to:
                return False
    return True


def brute_force_compatible(g: JsjGraph) -> bool:
    """Enumerate every family choice and every achievable boundary character per vertex."""
    n = len(g.vertices)
    options = []
    for i, v in enumerate(g.vertices):
        opts = []
        for f, rep in enumerate(v.reports):
            fam = KLEIN_FAMILIES[f] if v.kind == "KleinBundle" else None
            for bits in rep.achievable():
                opts.append((fam, bits))
        options.append(opts)
    for combo in itertools.product(*options):
        a = SignAssignment({i: c[0] for i, c in enumerate(combo) if c[0]}, {},
                           {i: combo[i][1] for i in range(n)}, ())
        if check_assignment(g, a):
            return True
    return False


def lift_dimension(g: JsjGraph) -> int:
    return sum(len(v.reports[0].twists) for v in g.vertices)


# --- hypotheses --------------------------------------------------------------

def check_hypotheses(g: JsjGraph) -> dict:
    """Structural hypotheses of the compatibility theorem, plus recorded flags.

    The fiber-gluing condition on Klein vertices is topological; it is read
    from the vertex parameter ``fiber_glued_to_klein_fiber`` and never derived.
    """
    n = len(g.vertices)
    ends_ok = all(g.vertices[i].kind in ("DiskCone", "KleinBundle") for i in {0, n - 1})
    interior_ok = all(v.kind in ("AnnulusCone", "Hyperbolic") for v in g.vertices[1:-1])
    two_klein = n == 2 and all(v.kind == "KleinBundle" for v in g.vertices)
    flags = {str(i): bool(v.params.get("fiber_glued_to_klein_fiber", False))
             for i, v in enumerate(g.vertices) if v.kind == "KleinBundle"}
    return {"line": True, "end_pieces": ends_ok, "interior_pieces": interior_ok,
            "not_two_klein_bundles": not two_klein,
            "fiber_gluing_flags": flags,
            "holds": ends_ok and interior_ok and not two_klein and not any(flags.values())}


# --- example graphs ----------------------------------------------------------

SWAP = ((0, 1), (1, 0))


def twist_knot_graph(p: int = 2, q: int = 3, r1: int = 1, r2: int = 1) -> JsjGraph:
    """Twisted I-bundle over the Klein bottle glued to a torus knot exterior (fiber to s^2 swapped)."""
    return JsjGraph((make_vertex("KleinBundle"),
                     make_vertex("DiskCone", {"p": p, "q": q, "r1": r1, "r2": r2})),
                    (Edge(0, 1, SWAP),))


def three_piece_graph(r: int = 2, beta: int = 1, p: int = 2, q: int = 3,
                      r1: int = 1, r2: int = 1) -> JsjGraph:
    """Twisted I-bundle, a cable-type annulus piece and a torus knot exterior."""
    return JsjGraph((make_vertex("KleinBundle"),
                     make_vertex("AnnulusCone", {"r": r, "beta": beta}),
                     make_vertex("DiskCone", {"p": p, "q": q, "r1": r1, "r2": r2})),
                    (Edge(0, 1, SWAP), Edge(1, 2, SWAP)))


def result_json(g: JsjGraph, result) -> dict:
    obj = result.to_json_obj()
    obj["hypotheses"] = check_hypotheses(g)
    obj["interior_types"] = {str(i): classify_interior_piece(v.reports[0])
                             for i, v in enumerate(g.vertices) if 0 < i < len(g.vertices) - 1}
    obj["lift_dimension"] = lift_dimension(g)
    return obj
