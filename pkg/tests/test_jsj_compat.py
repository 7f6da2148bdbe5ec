from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charvar.jsj_compat import (SWAP, Edge, GraphError, JsjGraph, SignAssignment, Unsatisfiable,
                                brute_force_compatible, check_assignment, check_hypotheses,
                                classify_interior_piece, graph_from_obj, lift_dimension, load_graph,
                                make_vertex, solve_compatibility, three_piece_graph,
                                twist_knot_graph)
from charvar.seifert_holonomy import annulus_cone_report, declared_report

DATA = Path(__file__).resolve().parents[1] / "src" / "charvar" / "data"

# det +-1 integer matrices, reduced mod 2 these cover all of GL2(Z/2)
GLUINGS = [((1, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 1), (0, 1)), ((1, 0), (1, 1)),
           ((2, 1), (1, 1)), ((1, 2), (0, -1)), ((0, -1), (1, 3)), ((3, 2), (1, 1))]

bits = st.integers(0, 1)


@st.composite
def custom_vertex(draw, tori: int, budget: int):
    n = 2 * tori
    base = draw(st.lists(bits, min_size=n, max_size=n))
    k = draw(st.integers(0, min(budget, n)))
    twists = draw(st.lists(st.lists(bits, min_size=n, max_size=n), min_size=k, max_size=k))
    return make_vertex("Custom", report={"base": base, "twists": twists})


@st.composite
def line_graphs(draw):
    n = draw(st.integers(2, 4))
    budget = 10
    vertices = []
    for i in range(n):
        tori = 1 if i in (0, n - 1) else 2
        if tori == 1 and draw(st.integers(0, 3)) == 0:
            v = make_vertex("KleinBundle")
        else:
            v = draw(custom_vertex(tori, min(budget, 3)))
        budget -= len(v.reports[0].twists)
        vertices.append(v)
    edges = tuple(Edge(i, i + 1, draw(st.sampled_from(GLUINGS))) for i in range(n - 1))
    return JsjGraph(tuple(vertices), edges)


@settings(max_examples=150)
@given(line_graphs())
def test_solver_matches_brute_force(g):
    assert lift_dimension(g) <= 10
    result = solve_compatibility(g)
    assert isinstance(result, SignAssignment) == brute_force_compatible(g)
    if isinstance(result, SignAssignment):
        assert check_assignment(g, result)
        for i, fam in result.families.items():
            assert g.vertices[i].kind == "KleinBundle" and fam in ("A", "B")
    else:
        assert result.conflict


def test_twist_knot_graph_satisfiable():
    g = twist_knot_graph()
    result = solve_compatibility(g)
    assert isinstance(result, SignAssignment)
    assert result.families[0] in ("A", "B")
    assert check_assignment(g, result)
    assert check_hypotheses(g)["holds"]


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_three_piece_graph_satisfiable(r):
    g = three_piece_graph(r=r)
    result = solve_compatibility(g)
    assert isinstance(result, SignAssignment)
    assert result.families[0] in ("A", "B")
    assert check_assignment(g, result)
    assert brute_force_compatible(g)


def test_data_files():
    for name in ("twist_knot_graph", "three_piece_graph"):
        g = load_graph(DATA / f"{name}.json")
        assert isinstance(solve_compatibility(g), SignAssignment)
    conflict = solve_compatibility(load_graph(DATA / "conflict_graph.json"))
    assert isinstance(conflict, Unsatisfiable)
    assert conflict.conflict == ((0, 1),)


def test_conflict_reports_edge():
    # both ends forced negative on classes that the identity gluing sends to
    # positive classes, with no freedom left
    g = graph_from_obj({"vertices": [{"kind": "Custom", "report": {"base": [1, 1], "twists": []}},
                                     {"kind": "Custom", "report": {"base": [0, 0], "twists": []}}],
                        "edges": [{"from": 0, "to": 1, "matrix": [[1, 0], [0, 1]]}]})
    result = solve_compatibility(g)
    assert isinstance(result, Unsatisfiable)
    assert result.conflict == ((0, 1),)
    assert not brute_force_compatible(g)


def test_minimal_conflict_is_one_edge():
    ok = {"kind": "Custom", "report": {"base": [0, 0, 0, 0], "twists": []}}
    g = graph_from_obj({"vertices": [{"kind": "Custom", "report": {"base": [0, 0], "twists": []}}, ok,
                                     {"kind": "Custom", "report": {"base": [1, 0], "twists": []}}],
                        "edges": [{"from": 0, "to": 1, "matrix": [[1, 0], [0, 1]]},
                                  {"from": 1, "to": 2, "matrix": [[1, 0], [0, 1]]}]})
    result = solve_compatibility(g)
    assert isinstance(result, Unsatisfiable)
    assert result.conflict == ((1, 2),)


def test_classify_type1_and_type3():
    assert classify_interior_piece(declared_report(2, [[0, 1, 0, 0], [0, 0, 0, 1]])) == "Type1"
    assert classify_interior_piece(declared_report(2, [[1, 0, 1, 0], [0, 1, 0, 1]])) == "Type3"
    assert classify_interior_piece(annulus_cone_report(2)) == "Type1"
    assert classify_interior_piece(annulus_cone_report(3)) == "Type3"


def test_classify_rejects_small_kernel():
    from charvar.seifert_holonomy import SignLiftReport
    rep = SignLiftReport(None, 2, kernel=((0, 1, 0, 0),), kernel_bits=(1,))
    with pytest.raises(ValueError, match="dimension"):
        classify_interior_piece(rep)


def test_bad_determinant():
    with pytest.raises(GraphError, match="determinant"):
        JsjGraph((make_vertex("KleinBundle"), make_vertex("DiskCone", {"p": 2, "q": 3})),
                 (Edge(0, 1, ((2, 0), (0, 1))),))


def test_graph_shape_errors():
    k = make_vertex("KleinBundle")
    with pytest.raises(GraphError, match="edges"):
        JsjGraph((k, k), ())
    with pytest.raises(GraphError, match="boundary tori"):
        JsjGraph((k, k, k), (Edge(0, 1, SWAP), Edge(1, 2, SWAP)))
    with pytest.raises(GraphError, match="unknown piece kind"):
        make_vertex("Lens")
    with pytest.raises(GraphError, match="explicit report"):
        make_vertex("Hyperbolic")


def test_hypotheses_flags():
    g = graph_from_obj({"vertices": [{"kind": "KleinBundle", "params": {"fiber_glued_to_klein_fiber": True}},
                                     {"kind": "DiskCone", "params": {"p": 2, "q": 3}}],
                        "edges": [{"from": 0, "to": 1, "matrix": [[0, 1], [1, 0]]}]})
    hyp = check_hypotheses(g)
    assert hyp["fiber_gluing_flags"] == {"0": True}
    assert not hyp["holds"]
    two = JsjGraph((make_vertex("KleinBundle"), make_vertex("KleinBundle")), (Edge(0, 1, SWAP),))
    assert not check_hypotheses(two)["not_two_klein_bundles"]


def test_hyperbolic_interior_declared_by_kernel():
    g = graph_from_obj({
        "vertices": [{"kind": "KleinBundle"},
                     {"kind": "Hyperbolic", "report": {"tori": 2, "kernel": [[1, 0, 1, 0], [0, 1, 0, 1]]}},
                     {"kind": "DiskCone", "params": {"p": 3, "q": 5, "r1": 2, "r2": 1}}],
        "edges": [{"from": 0, "to": 1, "matrix": [[0, 1], [1, 0]]},
                  {"from": 1, "to": 2, "matrix": [[1, 0], [0, 1]]}]})
    assert classify_interior_piece(g.vertices[1].reports[0]) == "Type3"
    result = solve_compatibility(g)
    assert isinstance(result, SignAssignment) and check_assignment(g, result)
    assert brute_force_compatible(g)
