"""Slow reference computations used only to cross-check the library."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from pdgcat import linalg_fp as la
from pdgcat.pcomplex import PComplex


def _span_rank(vectors: List[np.ndarray], p: int) -> int:
    if not vectors:
        return 0
    return la.rank(np.array(vectors), p)


def jordan_blocks(U: PComplex) -> Dict[Tuple[int, int], int]:
    """Build a graded Jordan basis greedily and return {(length, start): mult}.

    For k = p down to 1 and each degree j, choose vectors of ker d^k in U^j that are
    independent modulo ker d^{k-1} + d(ker d^{k+1} from U^{j-2}) + chains already
    started in degree j. Afterwards check the chains form a basis of U.
    """
    p = U.p
    out: Dict[Tuple[int, int], int] = {}
    heads: Dict[int, List[Tuple[np.ndarray, int]]] = {j: [] for j in U.degrees()}

    def kernel(j, k):
        if k == 0:
            return np.zeros((0, U.dim(j)), dtype=np.int64)
        if U.dim(j + 2 * k) == 0:
            return np.eye(U.dim(j), dtype=np.int64)
        return la.nullspace(U.power(j, k), p)

    for k in range(p, 0, -1):
        for j in U.degrees():
            n = U.dim(j)
            ker_k = kernel(j, k)
            sub = [r for r in kernel(j, k - 1)]
            if U.dim(j - 2):
                for v in kernel(j - 2, k + 1):
                    sub.append(la.matmul(U.dmap(j - 2), v.reshape(-1, 1), p).ravel())
            for v, _ in heads[j]:
                sub.append(v)
            base = _span_rank(sub, p)
            for v in ker_k:
                if _span_rank(sub + [v], p) > base:
                    sub.append(v)
                    base += 1
                    heads[j].append((v, k))
                    out[(k, j)] = out.get((k, j), 0) + 1
    # the chains must span U
    for j in U.degrees():
        vecs = []
        for s in range(0, p):
            for v, k in heads.get(j - 2 * s, []):
                if s < k:
                    vecs.append(la.matmul(U.power(j - 2 * s, s), v.reshape(-1, 1), p).ravel())
        if len(vecs) != U.dim(j) or _span_rank(vecs, p) != U.dim(j):
            raise AssertionError(f"greedy chains do not form a basis in degree {j}")
    return out


def subspace_dim_sum(a: List[np.ndarray], b: List[np.ndarray], p: int) -> int:
    return _span_rank(list(a) + list(b), p)


def slash_by_definition(U: PComplex, k: int) -> Dict[int, int]:
    """ker d^{k+1} / (im d^{p-k-1} + ker d^k) computed from explicit subspaces."""
    p = U.p
    out = {}
    for j in U.degrees():
        n = U.dim(j)

        def ker(m):
            if m == 0:
                return []
            if U.dim(j + 2 * m) == 0:
                return list(np.eye(n, dtype=np.int64))
            return list(la.nullspace(U.power(j, m), p))

        src = j - 2 * (p - k - 1)
        im = []
        if U.dim(src):
            im = list(U.power(src, p - k - 1).T)
        v = _span_rank(ker(k + 1), p) - subspace_dim_sum(im, ker(k), p)
        if v:
            out[j] = v
    return out


def rational_rank(rows: List[List[int]]) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def balanced_product_rule(p: int, i: int, j: int) -> Dict[Tuple[int, int], int]:
    """Blocks {(length, start): mult} of V~_i (x) V~_j from the closed product rule."""
    out: Dict[Tuple[int, int], int] = {}
    for m in range(abs(i - j), min(i + j, 2 * p - i - j - 4) + 1, 2):
        out[(m + 1, -m)] = out.get((m + 1, -m), 0) + 1
    n = max(0, i + j + 2 - p)
    for s in range(n - 1, -n, -2):
        key = (p, -(p - 1) + s)
        out[key] = out.get(key, 0) + 1
    return out


def nh_iterate_delta1(p: int, a: int, k: int):
    """d_a^k(delta_1) in NH_2 from the closed formula valid for k >= 3."""
    from math import comb

    from pdgcat.base_arith import Poly
    from pdgcat.nilhecke import NHElem

    x1, x2 = Poly.var(p, 2, 1), Poly.var(p, 2, 2)
    s = Poly.zero(p, 2)
    for i in range(k - 2):
        c = (-1) ** i * comb(k - 3, i)
        for j in range(k - 3 - i):
            c *= a + 2 + j
        for l in range(i):
            c *= a - 2 - l
        s = s + (x1 ** i * x2 ** (k - 3 - i)).scale(c)
    lead = (a + 1) * a * (a - 1)
    with_delta = ((x2 - x1) ** 3 * s).scale(lead)
    without = ((x2 - x1) ** 2 * s).scale(lead)
    return NHElem(p, 2, {(2, 1): with_delta, (1, 2): without})


def nh2_symbol_formula(p: int, a: int):
    """1 + q^{-2} (a+2)_{q^2} (p+2-a)_{q^2}."""
    from pdgcat.oring import o_reduce, unbalanced_int

    return o_reduce(p, {0: 1}) + o_reduce(p, {-2: 1}) * unbalanced_int(p, a + 2) * unbalanced_int(p, p + 2 - a)


def cartan_closed_forms(p: int, a: int, b: int, r: int, s: int):
    """The nine closed forms for [RHOM(P_u, P_v)], keyed by (row u, column v) in order iij, iji, jii."""
    from pdgcat.oring import o_reduce, unbalanced_int

    Q = lambda k: o_reduce(p, {k: 1})
    n = lambda k: unbalanced_int(p, k)
    m = {}
    m[(1, 1)] = Q(0) + Q(-2) * n(a + 2) * n(2 - a)
    m[(2, 1)] = Q(1) * n(1 + p - s) * n(r) + Q(-1) * n(a + 2) * n(1 + p - s) * n(1 + r - a)
    m[(3, 1)] = Q(2) * n(1 + p - 2 * s) * n(r) * n(r) + n(1 + p - 2 * s) * n(1 + r + a) * n(1 + r - a)
    m[(1, 2)] = Q(1) * n(1 + p - r) * n(s) + Q(-1) * n(a + 2 - r) * n(2 - a) * n(s)
    m[(2, 2)] = Q(0)
    m[(3, 2)] = Q(1) * n(1 + p - s) * n(r) + Q(-1) * n(1 + p - s) * n(a + 2) * n(1 + r - a)
    m[(1, 3)] = Q(2) * n(1 + p - r) * n(1 + p - r) * n(2 * s - 1) + n(a + 2 - r) * n(2 - a - r) * n(2 * s - 1)
    m[(2, 3)] = Q(1) * n(1 + p - r) * n(s) + Q(-1) * n(a + 2 - r) * n(s) * n(2 - a)
    m[(3, 3)] = Q(0) + Q(-2) * n(a + 2) * n(2 - a)
    return m


def a1xa1_rhom_formula(p: int, u: int, v: int):
    """(1 + q^2 + ... + q^{2(p-u)})(1 + ... + q^{2v})."""
    from pdgcat.oring import o_reduce

    left = o_reduce(p, {2 * k: 1 for k in range(p - u + 1)})
    right = o_reduce(p, {2 * k: 1 for k in range(v + 1)})
    return left * right
