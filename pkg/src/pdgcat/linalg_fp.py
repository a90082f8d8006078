"""Dense Gaussian elimination over F_p (numba kernels on int64 arrays)."""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = [
    "as_fp",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "solve_many",
    "row_basis",
    "matmul",
    "in_rowspace",
    "sparse_rank",
    "sparse_solve",
]


def as_fp(a, p: int) -> np.ndarray:
    arr = np.asarray(a, dtype=np.int64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return np.mod(arr, p)


@njit(cache=True)
def _rref_inplace(m, p, reduced):
    # entries stay in [0, p); every update a + g*b is < p^2 and is read back through a table
    rows, cols = m.shape
    tab = np.empty(p * p, dtype=m.dtype)
    for i in range(p * p):
        tab[i] = i % p
    invs = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        for y in range(1, p):
            if x * y % p == 1:
                invs[x] = y
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(c, cols):
                tmp = m[r, k]
                m[r, k] = m[piv, k]
                m[piv, k] = tmp
        inv = invs[m[r, c]]
        if inv != 1:
            for k in range(c, cols):
                m[r, k] = tab[m[r, k] * inv]
        start = 0 if reduced else r + 1
        for i in range(start, rows):
            if i != r:
                f = m[i, c]
                if f != 0:
                    g = p - f
                    for k in range(c, cols):
                        m[i, k] = tab[m[i, k] + g * m[r, k]]
        pivots[r] = c
        r += 1
    return r, pivots[:r].copy()


def rref(a, p: int, reduced: bool = True):
    """Row-reduce a copy of a; returns (matrix, pivot columns)."""
    dt = np.int32 if p * p < 2**31 else np.int64
    m = np.array(as_fp(a, p), dtype=dt, copy=True)
    if m.size == 0:
        return m, np.zeros(0, dtype=np.int64)
    r, piv = _rref_inplace(m, p, reduced)
    return m, piv


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(a, p, reduced=False)[1])


def row_basis(a, p: int) -> np.ndarray:
    """Reduced echelon basis of the row space."""
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros((0, a.shape[1] if a.ndim == 2 else 0), dtype=np.int64)
    m, piv = rref(a, p)
    return m[: len(piv)].astype(np.int64)


def nullspace(a, p: int) -> np.ndarray:
    """Rows spanning {v : a v = 0}."""
    a = as_fp(a, p)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    m, piv = rref(a, p)
    pivset = set(int(c) for c in piv)
    free = [c for c in range(cols) if c not in pivset]
    out = np.zeros((len(free), cols), dtype=np.int64)
    m = m.astype(np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, c in enumerate(piv):
            out[i, c] = (-m[r, f]) % p
    return out


def solve(a, b, p: int):
    """Some x with a x = b, or None."""
    a = as_fp(a, p)
    b = np.mod(np.asarray(b, dtype=np.int64).reshape(-1, 1), p)
    rows, cols = a.shape
    aug = np.hstack([a, b])
    m, piv = rref(aug, p)
    if len(piv) and piv[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    m = m.astype(np.int64)
    for r, c in enumerate(piv):
        x[c] = m[r, cols]
    return x


def solve_many(a, b, p: int):
    """Some X with a X = B (B a matrix), or None if a column is unreachable."""
    a = as_fp(a, p)
    b = np.mod(np.asarray(b, dtype=np.int64), p)
    rows, cols = a.shape
    m, piv = rref(np.hstack([a, b]), p)
    piv = list(piv)
    if any(c >= cols for c in piv):
        return None
    x = np.zeros((cols, b.shape[1]), dtype=np.int64)
    m = m.astype(np.int64)
    for r, c in enumerate(piv):
        x[c] = m[r, cols:]
    return x


def matmul(a, b, p: int) -> np.ndarray:
    """Exact product mod p; float BLAS when the partial sums stay below 2^53."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if a.shape[1] * (p - 1) ** 2 < 2**52:
        prod = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
        return np.mod(prod.astype(np.int64), p)
    return np.mod(a @ b, p)


def in_rowspace(basis, v, p: int) -> bool:
    basis = np.asarray(basis)
    if basis.size == 0:
        return not np.any(np.mod(v, p))
    return rank(np.vstack([basis, np.asarray(v).reshape(1, -1)]), p) == rank(basis, p)


# sparse elimination (rows as dicts column -> residue)


def _sparse_echelon(rows, p: int):
    """Incremental echelon form; returns pivot rows keyed by leading column, each monic."""
    piv: dict = {}
    for row in rows:
        r = {c: v % p for c, v in row.items() if v % p}
        while r:
            c = min(r)
            prow = piv.get(c)
            if prow is None:
                inv = pow(r[c], p - 2, p)
                piv[c] = {k: v * inv % p for k, v in r.items()}
                break
            f = r[c]
            for k, v in prow.items():
                nv = (r.get(k, 0) - f * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return piv


def sparse_rank(rows, p: int) -> int:
    return len(_sparse_echelon(rows, p))


def sparse_solve(rows, rhs, ncols: int, p: int):
    """Solve A x = b with A given as a list of row dicts; None if inconsistent.

    rhs maps row index -> value. Free variables are set to zero.
    """
    aug = []
    for i, row in enumerate(rows):
        r = dict(row)
        if rhs.get(i, 0) % p:
            r[ncols] = rhs[i]
        aug.append(r)
    piv = _sparse_echelon(aug, p)
    if ncols in piv:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for c in sorted(piv, reverse=True):
        r = piv[c]
        val = r.get(ncols, 0)
        for k, v in r.items():
            if k != c and k != ncols:
                val -= v * x[k]
        x[c] = val % p
    return x
