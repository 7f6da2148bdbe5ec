from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from charvar.exact import GaussRat
from charvar.klein_bundle import build_rep
from charvar.seifert_holonomy import three_punct_sphere_rep
from charvar.sl2 import (Mat2, mat_det, mat_inv, mat_mul, mat_trace, random_sl2, random_sl2_array,
                         word_eval, word_trace_batch)
from charvar.words import Word, parse_word

from .strategies import gaussrats, words

I = GaussRat(0, 1)


@st.composite
def sl2_exact(draw):
    """Products of elementary matrices over Q(i): det 1 by construction."""
    m = Mat2.identity()
    for _ in range(draw(st.integers(0, 4))):
        k = draw(gaussrats)
        e = Mat2(GaussRat(1), k, GaussRat(0), GaussRat(1)) if draw(st.booleans()) \
            else Mat2(GaussRat(1), GaussRat(0), k, GaussRat(1))
        m = m * e
    return m


def test_klein_a_product():
    rep = build_rep("A", (1,))
    st_ = mat_mul(rep.s, rep.t)
    assert st_ == Mat2(GaussRat(3), -I, -4 * I, GaussRat(-1))
    assert mat_trace(st_) == 2


def test_thrice_punctured_product():
    imgs = three_punct_sphere_rep()
    c = mat_mul(imgs["a"], imgs["b"])
    assert c == Mat2.from_rows([[-3, 2], [-2, 1]])
    assert mat_trace(c) == -2


@given(sl2_exact())
def test_inverse_gives_identity(m):
    assert mat_det(m) == 1
    assert mat_mul(m, mat_inv(m)).is_identity()


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        mat_inv(Mat2.from_rows([[1, 1], [1, 1]]))


def test_word_eval_examples():
    a = build_rep("A", (1,))
    assert a.image(parse_word("s^2 t^2", ["s", "t"])).is_identity()
    c = build_rep("C", (1,))
    s2 = word_eval(parse_word("s^2", ["s", "t"]), c.images())
    assert s2 == Mat2.from_rows([[1, 2], [0, 1]])
    assert s2.trace() == 2
    assert word_eval(Word(), c.images()).is_identity()


@given(words(), sl2_exact(), sl2_exact())
def test_word_eval_preserves_det(w, a, b):
    assert word_eval(w, {"a": a, "b": b}).det() == 1


@given(sl2_exact(), sl2_exact())
def test_trace_cyclic(m, n):
    assert (m * n).trace() == (n * m).trace()


def test_random_sl2_has_det_one():
    rng = np.random.default_rng(3)
    arr = random_sl2_array(rng, (200,))
    det = arr[:, 0, 0] * arr[:, 1, 1] - arr[:, 0, 1] * arr[:, 1, 0]
    assert np.max(np.abs(det - 1)) < 1e-12
    assert abs(complex(random_sl2(rng).det()) - 1) < 1e-12


def test_batch_trace_matches_exact_eval():
    rng = np.random.default_rng(5)
    mats = random_sl2_array(rng, (20, 2))
    w = parse_word("a^2 b^-1 a b^3")
    batch = word_trace_batch(w, ["a", "b"], mats)
    for k in range(20):
        imgs = {g: Mat2.from_rows(mats[k, i].tolist()) for i, g in enumerate("ab")}
        assert abs(complex(word_eval(w, imgs).trace()) - batch[k]) < 1e-10


def test_json_form():
    assert Mat2.identity().to_json() == '[["1", "0"], ["0", "1"]]'
