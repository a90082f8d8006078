"""Matrix p-DG algebras (M(n), ad_J) and the smash product with H = k[d]/(d^p)."""

from __future__ import annotations

from math import comb
from typing import Dict, Tuple

import numpy as np

from . import linalg_fp as la
from .base_arith import check_prime
from .pcomplex import PComplex

__all__ = [
    "jordan_block",
    "ad",
    "ad_power_check",
    "contraction_witness_matrix",
    "commutator_identity",
    "SmashElem",
    "corner_ring_check",
    "column_module",
]


def jordan_block(n: int, p: int) -> np.ndarray:
    """J_n = sum_i E_{i,i+1}; with deg E_{i,j} = 2(j-i) it has degree 2."""
    J = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        J[i, i + 1] = 1
    return J


def ad(J: np.ndarray, M: np.ndarray, p: int) -> np.ndarray:
    return np.mod(la.matmul(J, M, p) - la.matmul(M, J, p), p)


def ad_power_check(J, M, p: int) -> bool:
    """(ad_J)^p (M) == ad_{J^p}(M)."""
    J = np.mod(np.asarray(J, dtype=np.int64), p)
    M = np.mod(np.asarray(M, dtype=np.int64), p)
    if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape != M.shape:
        raise ValueError("J and M must be square of the same size")
    lhs = M
    for _ in range(p):
        lhs = ad(J, lhs, p)
    Jp = np.eye(J.shape[0], dtype=np.int64)
    for _ in range(p):
        Jp = la.matmul(Jp, J, p)
    return bool(np.array_equal(lhs, ad(Jp, M, p)))


def contraction_witness_matrix(p: int) -> np.ndarray:
    """W = sum_{i=1}^{p-1} i E_{i+1,i}, checked to satisfy [J_p, W] = I."""
    check_prime(p)
    W = np.zeros((p, p), dtype=np.int64)
    for i in range(1, p):
        W[i, i - 1] = i % p
    if not np.array_equal(ad(jordan_block(p, p), W, p), np.eye(p, dtype=np.int64)):
        raise ArithmeticError("witness does not contract")
    return W


def commutator_identity(D: np.ndarray, L: np.ndarray, p: int) -> bool:
    """sum_i D^{p-1-i} L^{p-1} D^i == -Id, for operators with [D, L] = Id."""
    n = D.shape[0]
    eye = np.eye(n, dtype=np.int64)

    def mpow(A, k):
        out = eye
        for _ in range(k):
            out = la.matmul(out, A, p)
        return out

    Lp = mpow(L, p - 1)
    total = np.zeros_like(eye)
    for i in range(p):
        total = total + la.matmul(la.matmul(mpow(D, p - 1 - i), Lp, p), mpow(D, i), p)
    return bool(np.array_equal(np.mod(total, p), np.mod(-eye, p)))


class SmashElem:
    """sum c * E_{i,j} d^r in the smash product of M(n) with H, d = ad_{J_n}."""

    def __init__(self, p: int, n: int, terms: Dict[Tuple[int, int, int], int] | None = None):
        self.p = p
        self.n = n
        self.terms = {}
        for (i, j, r), c in (terms or {}).items():
            c %= p
            if c and r < p:
                self.terms[(i, j, r)] = c

    @classmethod
    def basic(cls, p: int, n: int, i: int, j: int, r: int = 0) -> "SmashElem":
        return cls(p, n, {(i, j, r): 1})

    @classmethod
    def d_power(cls, p: int, n: int, r: int) -> "SmashElem":
        """d^r as sum_i E_{i,i} d^r."""
        return cls(p, n, {(i, i, r): 1 for i in range(1, n + 1)})

    def _ad(self, i: int, j: int) -> Dict[Tuple[int, int], int]:
        # [J, E_ij] = E_{i-1,j} - E_{i,j+1}
        out = {}
        if i > 1:
            out[(i - 1, j)] = 1
        if j < self.n:
            out[(i, j + 1)] = out.get((i, j + 1), 0) - 1
        return out

    def _ad_power(self, i: int, j: int, k: int) -> Dict[Tuple[int, int], int]:
        cur = {(i, j): 1}
        for _ in range(k):
            nxt: Dict[Tuple[int, int], int] = {}
            for (a, b), c in cur.items():
                for key, v in self._ad(a, b).items():
                    nxt[key] = nxt.get(key, 0) + c * v
            cur = {key: v % self.p for key, v in nxt.items() if v % self.p}
        return cur

    def __mul__(self, other: "SmashElem") -> "SmashElem":
        # d^r E = sum_l C(r,l) ad^l(E) d^{r-l}
        p = self.p
        acc: Dict[Tuple[int, int, int], int] = {}
        for (i, j, r), c in self.terms.items():
            for (k, l, s), e in other.terms.items():
                for t in range(r + 1):
                    coef = comb(r, t) * c * e
                    if coef % p == 0:
                        continue
                    for (a, b), v in self._ad_power(k, l, t).items():
                        if j != a:
                            continue
                        key = (i, b, r - t + s)
                        acc[key] = acc.get(key, 0) + coef * v
        return SmashElem(p, self.n, acc)

    def __add__(self, other: "SmashElem") -> "SmashElem":
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return SmashElem(self.p, self.n, acc)

    def __eq__(self, other) -> bool:
        return isinstance(other, SmashElem) and self.terms == other.terms

    def __repr__(self) -> str:
        return " + ".join(f"{c}*E{i}{j}d^{r}" for (i, j, r), c in sorted(self.terms.items())) or "0"


def corner_ring_check(n: int, p: int) -> bool:
    """(E_nn d^r E_nn)(E_nn d^s E_nn) == E_nn d^{r+s} E_nn for all 0 <= r, s < p."""
    check_prime(p)
    if not 1 <= n <= p:
        raise ValueError("need 1 <= n <= p")
    E = SmashElem.basic(p, n, n, n)
    corner = {r: E * SmashElem.d_power(p, n, r) * E for r in range(2 * p - 1)}
    zero = SmashElem(p, n)
    for r in range(p):
        for s in range(p):
            rhs = corner[r + s] if r + s < p else zero
            if corner[r] * corner[s] != rhs:
                return False
    return True


def column_module(n: int, p: int) -> PComplex:
    """k^n with d = J_n acting, deg e_i = 2(n - i)."""
    J = jordan_block(n, p)
    dims = {2 * (n - i): 1 for i in range(1, n + 1)}
    d = {}
    for i in range(2, n + 1):
        # d e_i = e_{i-1}, from degree 2(n-i) to 2(n-i)+2
        d[2 * (n - i)] = np.array([[J[i - 2, i - 1]]], dtype=np.int64)
    return PComplex(p, dims, d)
