"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--points N] [--repeat R]
"""

from __future__ import annotations

import argparse
import importlib
import random
import timeit

import numpy as np

from charvar import _kernels_py
from charvar.sl2 import random_sl2_array
from charvar.trace_calculus import reduce_trace
from charvar.variety_lab import PRETZEL_WORDS


def _cases(points: int):
    rng = np.random.default_rng(1)
    poly = reduce_trace(PRETZEL_WORDS["m1"].commutator(PRETZEL_WORDS["l1"]), 2)
    exps, coeffs = poly.float_arrays()
    pts = rng.standard_normal((points, 3)) + 1j * rng.standard_normal((points, 3))
    mats = random_sl2_array(rng, (points, 3))
    word_rng = random.Random(2)
    letters = np.array([word_rng.randrange(3) for _ in range(12)], dtype=np.int64)
    powers = np.array([word_rng.choice((-2, -1, 1, 2)) for _ in range(12)], dtype=np.int64)
    return {
        f"eval_poly_batch ({len(coeffs)} terms)": ("eval_poly_batch", (exps, coeffs, pts)),
        "word_eval_batch (12 letters)": ("word_eval_batch", (letters, powers, mats)),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    try:
        compiled = importlib.import_module("charvar._kernels")
    except ImportError:
        compiled = None
        print("compiled kernels not built; timing the fallback only")
    print(f"{'kernel':<36}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, (fn, fargs) in _cases(args.points).items():
        t_py = min(timeit.repeat(lambda: getattr(_kernels_py, fn)(*fargs), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{name:<36}{t_py * 1e3:>12.2f}{'-':>12}{'-':>10}")
            continue
        t_cy = min(timeit.repeat(lambda: getattr(compiled, fn)(*fargs), number=1, repeat=args.repeat))
        a, b = getattr(_kernels_py, fn)(*fargs), getattr(compiled, fn)(*fargs)
        diff = float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(a)))))
        print(f"{name:<36}{t_py * 1e3:>12.2f}{t_cy * 1e3:>12.2f}{t_py / t_cy:>9.1f}x"
              f"   (max rel diff {diff:.1e})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
