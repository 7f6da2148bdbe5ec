"""Pure-Python (numpy) versions of the compiled kernels."""

from __future__ import annotations

import numpy as np


def eval_poly_batch(exps, coeffs, points):
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    pts = np.atleast_2d(np.asarray(points, dtype=np.complex128))
    n_pts = pts.shape[0]
    if exps.shape[0] and pts.shape[1] != exps.shape[1]:
        raise ValueError("point dimension does not match the polynomial")
    sr = np.zeros(n_pts)
    cr = np.zeros(n_pts)
    si = np.zeros(n_pts)
    ci = np.zeros(n_pts)
    for t in range(exps.shape[0]):
        term = np.full(n_pts, coeffs[t], dtype=np.complex128)
        for k in np.nonzero(exps[t])[0]:
            term = term * pts[:, k] ** int(exps[t, k])
        sr, cr = _neumaier(sr, cr, term.real)
        si, ci = _neumaier(si, ci, term.imag)
    return (sr + cr) + 1j * (si + ci)


def _neumaier(s, c, x):
    t = s + x
    big = np.abs(s) >= np.abs(x)
    c = c + np.where(big, (s - t) + x, (x - t) + s)
    return t, c


def word_eval_batch(letters, powers, mats):
    mats = np.asarray(mats, dtype=np.complex128)
    n = mats.shape[0]
    out = np.broadcast_to(np.eye(2, dtype=np.complex128), (n, 2, 2)).copy()
    for g, e in zip(letters, powers):
        m = mats[:, int(g)]
        if e < 0:
            det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
            inv = np.empty_like(m)
            inv[:, 0, 0] = m[:, 1, 1] / det
            inv[:, 0, 1] = -m[:, 0, 1] / det
            inv[:, 1, 0] = -m[:, 1, 0] / det
            inv[:, 1, 1] = m[:, 0, 0] / det
            m = inv
        for _ in range(abs(int(e))):
            out = out @ m
    return out
