"""Linear algebra over GF(2) on small dense matrices (lists of 0/1 rows)."""

from __future__ import annotations

from typing import Sequence

Matrix = list  # list[list[int]]


def _norm(rows: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, int]:
    rows = [[int(x) & 1 for x in r] for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    for r in rows:
        if len(r) != ncols:
            raise ValueError("ragged GF(2) matrix")
    return rows, ncols


def rref(rows: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m, ncols = _norm(rows, ncols)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                m[i] = [x ^ y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Basis of {x : A x = 0}."""
    red, pivots = rref(rows, ncols)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, p in zip(red, pivots):
            if row[f]:
                v[p] = 1
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int | None = None):
    """One solution of A x = b, or None when inconsistent."""
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    aug = [list(r) + [int(b) & 1] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [0] * n
    for row, p in zip(red, pivots):
        x[p] = row[n]
    return x


def in_rowspace(rows: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    n = len(v)
    if not rows:
        return not any(x & 1 for x in v)
    return rank(list(rows) + [list(v)], n) == rank(rows, n)


def matvec(rows: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a & b for a, b in zip(r, v)) & 1 for r in rows]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a & b for a, b in zip(u, v)) & 1


def transpose(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    m, n = _norm(rows, ncols)
    return [[m[i][j] for i in range(len(m))] for j in range(n)]


def span_basis(vectors: Sequence[Sequence[int]], n: int) -> Matrix:
    return rref(vectors, n)[0] if vectors else []
