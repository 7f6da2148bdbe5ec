# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: compensated polynomial evaluation and SL2 word products."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef inline void _neumaier(double x, double* s, double* c) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


cdef inline double complex _ipow(double complex z, long long e) noexcept nogil:
    cdef double complex r = 1.0
    while e > 0:
        if e & 1:
            r = r * z
        z = z * z
        e >>= 1
    return r


def eval_poly_batch(exps, coeffs, points):
    cdef cnp.int64_t[:, :] E = np.ascontiguousarray(exps, dtype=np.int64)
    cdef double complex[:] C = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef double complex[:, :] P = np.ascontiguousarray(np.atleast_2d(np.asarray(points, dtype=np.complex128)))
    cdef Py_ssize_t n_terms = E.shape[0], n_vars = E.shape[1], n_pts = P.shape[0]
    if n_terms and P.shape[1] != n_vars:
        raise ValueError("point dimension does not match the polynomial")
    out = np.zeros(n_pts, dtype=np.complex128)
    cdef double complex[:] O = out
    cdef Py_ssize_t i, t, k
    cdef double sr, cr, si, ci
    cdef double complex term
    with nogil:
        for i in range(n_pts):
            sr = 0.0; cr = 0.0; si = 0.0; ci = 0.0
            for t in range(n_terms):
                term = C[t]
                for k in range(n_vars):
                    if E[t, k]:
                        term = term * _ipow(P[i, k], E[t, k])
                _neumaier(term.real, &sr, &cr)
                _neumaier(term.imag, &si, &ci)
            O[i] = (sr + cr) + 1j * (si + ci)
    return out


def word_eval_batch(letters, powers, mats):
    """Products of generator images; mats has shape (n_tuples, n_gens, 2, 2)."""
    cdef cnp.int64_t[:] G = np.ascontiguousarray(letters, dtype=np.int64)
    cdef cnp.int64_t[:] X = np.ascontiguousarray(powers, dtype=np.int64)
    cdef double complex[:, :, :, :] M = np.ascontiguousarray(mats, dtype=np.complex128)
    cdef Py_ssize_t n = M.shape[0], L = G.shape[0], i, j
    out = np.zeros((n, 2, 2), dtype=np.complex128)
    cdef double complex[:, :, :] O = out
    cdef double complex a, b, c, d, p, q, r, s, ta, tb, tc, td, det
    cdef long long e, m
    with nogil:
        for i in range(n):
            a = 1.0; b = 0.0; c = 0.0; d = 1.0
            for j in range(L):
                p = M[i, G[j], 0, 0]; q = M[i, G[j], 0, 1]
                r = M[i, G[j], 1, 0]; s = M[i, G[j], 1, 1]
                e = X[j]
                if e < 0:
                    det = p * s - q * r
                    ta = s / det; tb = -q / det; tc = -r / det; td = p / det
                    p = ta; q = tb; r = tc; s = td
                    e = -e
                for m in range(e):
                    ta = a * p + b * r
                    tb = a * q + b * s
                    tc = c * p + d * r
                    td = c * q + d * s
                    a = ta; b = tb; c = tc; d = td
            O[i, 0, 0] = a; O[i, 0, 1] = b; O[i, 1, 0] = c; O[i, 1, 1] = d
    return out
