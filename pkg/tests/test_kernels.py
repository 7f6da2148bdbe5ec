from __future__ import annotations

import importlib
import os
import subprocess
import sys

import numpy as np
import pytest

from charvar import _kernels_py, kernels
from charvar.exact import MultiPoly
from charvar.sl2 import random_sl2_array

try:
    compiled = importlib.import_module("charvar._kernels")
except ImportError:  # extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def _poly_arrays():
    p = MultiPoly.parse("x^3*y - 2*x*y^2*z + z^4 - 1/3")
    return p.float_arrays()


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")


@needs_compiled
def test_eval_poly_parity():
    exps, coeffs = _poly_arrays()[:2]
    rng = np.random.default_rng(11)
    pts = rng.standard_normal((500, 3)) + 1j * rng.standard_normal((500, 3))
    a = compiled.eval_poly_batch(exps, coeffs, pts)
    b = _kernels_py.eval_poly_batch(exps, coeffs, pts)
    assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, np.max(np.abs(b)))


@needs_compiled
def test_word_eval_parity():
    rng = np.random.default_rng(12)
    mats = random_sl2_array(rng, (300, 3))
    letters = np.array([0, 1, 2, 0, 1], dtype=np.int64)
    powers = np.array([3, -1, 2, -2, 1], dtype=np.int64)
    a = compiled.word_eval_batch(letters, powers, mats)
    b = _kernels_py.word_eval_batch(letters, powers, mats)
    assert np.max(np.abs(a - b)) < 1e-10


def test_eval_poly_matches_exact():
    p = MultiPoly.parse("x^2*y - 3*x + 1/7")
    exps, coeffs = p.float_arrays()[:2]
    pts = np.array([[0.5, -2.0], [1.25, 3.0]], dtype=complex)
    got = kernels.eval_poly_batch(exps, coeffs, pts)
    for k, (x, y) in enumerate(pts):
        assert abs(got[k] - complex(p.eval({"x": x, "y": y}))) < 1e-12


def test_compensated_sum_cancellation():
    # 1e16 + 1 - 1e16 loses the 1 without compensation
    exps = np.array([[1], [0], [1]], dtype=np.int64)
    coeffs = np.array([1.0, 1.0, -1.0], dtype=complex)
    pts = np.array([[1e16]], dtype=complex)
    assert kernels.eval_poly_batch(exps, coeffs, pts)[0] == 1


def test_pure_fallback_selected_by_env():
    env = dict(os.environ, CHARVAR_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from charvar import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_benchmark_smoke(capsys):
    import runpy
    from pathlib import Path
    bench = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    mod = runpy.run_path(str(bench))
    assert mod["main"](["--points", "50", "--repeat", "1"]) == 0
    assert "word_eval_batch" in capsys.readouterr().out
