from __future__ import annotations

import math

import pytest

from charvar.exact import CycloNum
from charvar.klein_bundle import build_rep, klein_presentation
from charvar.seifert_holonomy import (annulus_cone_presentation, annulus_cone_report,
                                      boundary_kernel, brute_force_agrees, brute_force_signs,
                                      declared_report, disk_cone_analysis, disk_cone_case,
                                      disk_cone_case_table, disk_cone_presentation, disk_cone_rep,
                                      flexible_bit, peripheral_classes, report_from_images,
                                      sign_lift_report, three_punct_sphere_rep)
from charvar.sl2 import Mat2

EXPECTED = {"1": "h", "2.1": "a", "2.2": "ah", "2.3": "ah", "2.4": "a"}


def test_thrice_punctured_sphere():
    imgs = three_punct_sphere_rep()
    assert imgs["a"] == Mat2.from_rows([[1, 2], [0, 1]])
    assert imgs["b"] == Mat2.from_rows([[1, 0], [-2, 1]])
    assert imgs["c"] == imgs["a"] * imgs["b"]
    assert imgs["c"].trace() == -2
    assert imgs["a"].trace() == imgs["b"].trace() == 2


def test_disk_cone_2_3():
    rep = disk_cone_rep(2, 3)
    assert rep.x_q == CycloNum.rational(1, 12) / 2
    assert rep.b.trace() == 0
    assert rep.c.trace() == 1
    assert rep.c == rep.a * rep.b


def test_disk_cone_3_4():
    rep = disk_cone_rep(3, 4)
    assert rep.b.trace() == 1
    tr_c = CycloNum.zeta(8) + CycloNum.zeta(8, -1)
    assert rep.c.trace() == tr_c
    assert rep.x_q == (tr_c - 1) / 2


@pytest.mark.parametrize("model", ["rotation", "fuchsian"])
def test_disk_cone_exact_invariants(model):
    for p in range(2, 7):
        for q in range(3, 10):
            rep = disk_cone_rep(p, q, model)
            assert rep.scalar_equation() == 0
            assert rep.c == rep.a * rep.b
            assert rep.c.trace() == rep.target_trace()
            assert all(m.det() == 1 for m in (rep.a, rep.b, rep.c))


def test_fuchsian_model_negates_cone_trace():
    d, f = disk_cone_rep(3, 5, "rotation"), disk_cone_rep(3, 5, "fuchsian")
    assert f.c.trace() == -d.c.trace()


@pytest.mark.parametrize("p,q", [(1, 3), (2, 2), (3, 1)])
def test_disk_cone_bad_parameters(p, q):
    with pytest.raises(ValueError):
        disk_cone_rep(p, q)
    with pytest.raises(ValueError):
        disk_cone_case_table(p, q, 1, 1)


def test_presentation_gcd_check():
    with pytest.raises(ValueError, match="gcd"):
        disk_cone_presentation(3, 6, 3, 1)


def test_case_labels():
    assert disk_cone_case(3, 4, 1, 1) == "1"
    assert disk_cone_case(3, 5, 2, 2) == "2.1"
    assert disk_cone_case(3, 5, 2, 1) == "2.2"
    assert disk_cone_case(3, 5, 1, 2) == "2.3"
    assert disk_cone_case(3, 5, 1, 1) == "2.4"


@pytest.mark.parametrize("args,forced", [((3, 4, 1, 1), "h"), ((3, 5, 2, 2), "a"),
                                         ((3, 5, 2, 1), "ah"), ((3, 5, 1, 2), "ah"),
                                         ((3, 5, 1, 1), "a")])
def test_case_table_examples(args, forced):
    res = disk_cone_case_table(*args)
    assert res.forced_class == forced
    assert res.forced_trace == -2
    assert res.report.forced_negative == (forced,)


def test_case_table_sweep_matches_brute_force():
    seen = set()
    for p in range(2, 10):
        for q in range(3, 10):
            for r1 in range(1, 5):
                for r2 in range(1, 5):
                    if math.gcd(p, r1) != 1 or math.gcd(q, r2) != 1:
                        continue
                    res = disk_cone_case_table(p, q, r1, r2)
                    assert res.forced_class == EXPECTED[res.case], (p, q, r1, r2)
                    assert res.forced_trace == -2
                    piece, lifted, report = disk_cone_analysis(p, q, r1, r2)
                    assert brute_force_agrees(report, brute_force_signs(piece, lifted))
                    seen.add(res.case)
    assert seen == set(EXPECTED)


def test_rotation_model_case_two_has_positive_forced_trace():
    # the same class is fixed in both models; only its sign differs
    res = disk_cone_case_table(3, 5, 2, 2, model="rotation")
    assert res.forced_class == "a" and res.forced_trace == 2
    assert res.report.forced_negative == ()


def test_klein_reports():
    pres = klein_presentation()
    a = report_from_images(pres, build_rep("A", (1,)).images())
    assert a.h1_dim == 2 and a.forced_negative == ("s^2",)
    c = report_from_images(pres, build_rep("C", (1,)).images())
    assert c.fixed_classes == ("s^2",) and c.forced_negative == ()


def test_half_lives_half_dies_one_boundary():
    pieces = [klein_presentation()]
    for p, q, r1, r2 in [(2, 3, 1, 1), (3, 5, 2, 1), (5, 7, 3, 4)]:
        pieces.append(disk_cone_presentation(p, q, r1, r2))
    for piece in pieces:
        assert len(boundary_kernel(piece)) == 1


@pytest.mark.parametrize("r", range(2, 8))
def test_half_lives_half_dies_annulus(r):
    kernel = boundary_kernel(annulus_cone_presentation(r, 1))
    assert len(kernel) == 2


def test_annulus_cone_types():
    even = annulus_cone_report(2)
    assert set(even.kernel) == {(0, 1, 0, 0), (0, 0, 0, 1)}
    assert even.forced_negative == ("l0", "l1")
    odd = annulus_cone_report(3)
    assert set(odd.kernel) == {(1, 1, 1, 0), (0, 1, 0, 1)}
    assert odd.kernel_bits == (0, 0)
    assert odd.negative_flexible


def test_flexible_bit_rule():
    assert flexible_bit([0, 1]) == 1
    assert flexible_bit([0, 1, 0, 0]) == 1
    assert flexible_bit([1, 1, 1, 0]) == 0


def test_declared_report_checks():
    with pytest.raises(ValueError, match="dimension"):
        declared_report(2, [[0, 1, 0, 0]])
    with pytest.raises(ValueError, match="dependent"):
        declared_report(2, [[0, 1, 0, 0], [0, 1, 0, 0]])
    with pytest.raises(ValueError, match="negative-flexible"):
        # m0 and l0 each need bit 1, but then m0 + l0 gets 0 instead of 1
        declared_report(2, [[1, 0, 0, 0], [0, 1, 0, 0]])


def test_declared_report_achievable_respects_kernel():
    rep = declared_report(2, [[0, 1, 0, 0], [0, 0, 0, 1]])
    for bits in rep.achievable():
        assert bits[1] == 1 and bits[3] == 1


def test_sign_lift_report_rejects_inconsistent_signs():
    pres = klein_presentation()
    classes = peripheral_classes(pres)
    signs = {w: 1 for _, _, w in classes}
    # sign(ml) must equal sign(m) sign(l)
    bad = dict(signs)
    bad[classes[0][2]] = -1
    with pytest.raises(ValueError, match="inconsistent"):
        sign_lift_report(pres, bad)
    with pytest.raises(ValueError, match="relator"):
        sign_lift_report(pres, {**signs, pres.relators[0]: -1})
    with pytest.raises(ValueError, match="lacks"):
        sign_lift_report(pres, {})
