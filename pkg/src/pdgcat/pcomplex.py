"""Graded p-complexes over F_p: block decomposition, cohomology, tensor products and symbols.

A p-complex is stored degree by degree, with d[j] the matrix of the degree +2
operator U^j -> U^{j+2}. Infinite modules are represented by a window [lo, hi]
together with flags saying whether the module continues past either end.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Tuple

import numpy as np

from . import linalg_fp as la
from .oring import OElem, o_reduce, unbalanced_int

__all__ = [
    "PComplex",
    "Block",
    "Decomposition",
    "SymbolResult",
    "block",
    "direct_sum",
    "random_complex",
    "decompose",
    "slash_cohomology",
    "backslash_cohomology",
    "mayer_cohomology",
    "exactness_defects",
    "tensor",
    "dual",
    "symbol",
    "is_contractible",
    "quasi_isomorphic",
]


class PComplex:
    """Finite-window graded F_p space with a degree +2 operator d, d^p = 0."""

    def __init__(
        self,
        p: int,
        dims: Mapping[int, int],
        d: Mapping[int, np.ndarray] | None = None,
        open_low: bool = False,
        open_high: bool = False,
        window: Tuple[int, int] | None = None,
        check: bool = True,
    ):
        self.p = p
        self.dims = {int(j): int(n) for j, n in dims.items() if n}
        self.d: Dict[int, np.ndarray] = {}
        for j, m in (d or {}).items():
            m = np.mod(np.asarray(m, dtype=np.int64), p)
            want = (self.dim(j + 2), self.dim(j))
            if m.size == 0 and 0 in want:
                continue
            if m.shape != want:
                raise ValueError(f"d[{j}] has shape {m.shape}, expected {want}")
            if np.any(m):
                self.d[int(j)] = m
        if window is None:
            degs = sorted(self.dims) or [0]
            window = (degs[0], degs[-1])
        self.lo, self.hi = window
        self.open_low = open_low
        self.open_high = open_high
        self._ranks: Dict[Tuple[int, int], int] = {}
        if check:
            self.check_nilpotent()

    def dim(self, j: int) -> int:
        return self.dims.get(j, 0)

    def degrees(self) -> List[int]:
        return sorted(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dmap(self, j: int) -> np.ndarray:
        m = self.d.get(j)
        if m is None:
            return np.zeros((self.dim(j + 2), self.dim(j)), dtype=np.int64)
        return m

    def power(self, j: int, k: int) -> np.ndarray:
        """Matrix of d^k on U^j."""
        out = np.eye(self.dim(j), dtype=np.int64)
        for s in range(k):
            out = la.matmul(self.dmap(j + 2 * s), out, self.p)
        return out

    def check_nilpotent(self) -> None:
        for j in self.dims:
            if self.dim(j + 2 * self.p) and np.any(self.power(j, self.p)):
                raise ValueError(f"d^p is nonzero on degree {j}")

    def _fill_ranks(self, j: int) -> None:
        """rank(d^k | U^j) for k = 0..p, via a shrinking column basis of the image."""
        p = self.p
        n = self.dim(j)
        self._ranks[(j, 0)] = n
        cols = np.eye(n, dtype=np.int64)
        for k in range(1, p + 1):
            if cols.shape[1] == 0:
                self._ranks[(j, k)] = 0
                continue
            img = la.matmul(self.dmap(j + 2 * (k - 1)), cols, p)
            if img.shape[0] == 0:
                cols = np.zeros((0, 0), dtype=np.int64)
                self._ranks[(j, k)] = 0
                continue
            basis = la.row_basis(img.T, p)
            self._ranks[(j, k)] = basis.shape[0]
            cols = basis.T

    def rank(self, j: int, k: int) -> int:
        if k < 0:
            raise ValueError("negative power")
        if k > self.p:
            return 0
        if self.dim(j) == 0:
            return 0
        if (j, k) not in self._ranks:
            self._fill_ranks(j)
        return self._ranks[(j, k)]

    def degree_range(self) -> Tuple[int, int]:
        return self.lo, self.hi

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "dims": {str(j): n for j, n in sorted(self.dims.items())},
            "d": {str(j): m.tolist() for j, m in sorted(self.d.items())},
            "open_low": self.open_low,
            "open_high": self.open_high,
            "window": [self.lo, self.hi],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "PComplex":
        from .base_arith import check_prime

        p = check_prime(int(obj["p"]))
        dims = {int(j): int(n) for j, n in obj["dims"].items()}
        d = {}
        for j, rows in obj.get("d", {}).items():
            j = int(j)
            m = np.array(rows, dtype=np.int64).reshape(dims.get(j + 2, 0), dims.get(j, 0))
            d[j] = m
        window = tuple(obj["window"]) if "window" in obj else None
        return cls(
            p,
            dims,
            d,
            open_low=bool(obj.get("open_low", False)),
            open_high=bool(obj.get("open_high", False)),
            window=window,
        )

    def __repr__(self) -> str:
        return f"PComplex(p={self.p}, dims={dict(sorted(self.dims.items()))})"


def block(p: int, i: int, start: int = 0) -> PComplex:
    """V_i shifted to start in degree `start`: basis v, dv, ..., d^i v."""
    if not 0 <= i <= p - 1:
        raise ValueError("block index must lie in [0, p-1]")
    dims = {start + 2 * s: 1 for s in range(i + 1)}
    d = {start + 2 * s: np.ones((1, 1), dtype=np.int64) for s in range(i)}
    return PComplex(p, dims, d)


def balanced_block(p: int, i: int) -> PComplex:
    """The balanced block V~_i, symmetric about degree 0."""
    return block(p, i, -i)


def direct_sum(*parts: PComplex) -> PComplex:
    p = parts[0].p
    dims: Dict[int, int] = {}
    for U in parts:
        for j, n in U.dims.items():
            dims[j] = dims.get(j, 0) + n
    d = {}
    for j in dims:
        if not dims.get(j + 2):
            continue
        m = np.zeros((dims[j + 2], dims[j]), dtype=np.int64)
        r0 = c0 = 0
        for U in parts:
            mj = U.dmap(j)
            m[r0 : r0 + mj.shape[0], c0 : c0 + mj.shape[1]] = mj
            r0 += U.dim(j + 2)
            c0 += U.dim(j)
        d[j] = m
    lo = min(U.lo for U in parts)
    hi = max(U.hi for U in parts)
    return PComplex(
        p,
        dims,
        d,
        open_low=any(U.open_low for U in parts),
        open_high=any(U.open_high for U in parts),
        window=(lo, hi),
    )


def shift(U: PComplex, m: int) -> PComplex:
    """U{m}: everything moves up by m degrees."""
    return PComplex(
        U.p,
        {j + m: n for j, n in U.dims.items()},
        {j + m: M for j, M in U.d.items()},
        U.open_low,
        U.open_high,
        (U.lo + m, U.hi + m),
        check=False,
    )


def _random_invertible(n: int, p: int, rng: random.Random) -> np.ndarray:
    while True:
        m = np.array([[rng.randrange(p) for _ in range(n)] for _ in range(n)], dtype=np.int64)
        if la.rank(m, p) == n:
            return m


def _inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    red, piv = la.rref(np.hstack([m, np.eye(n, dtype=np.int64)]), p)
    return red[:, n:].astype(np.int64)


def random_complex(p: int, rng: random.Random, max_blocks: int = 4, span: int = 6):
    """Random block sum in a random basis; returns (complex, list of (k, start))."""
    blocks = []
    for _ in range(rng.randint(1, max_blocks)):
        k = rng.randint(1, p)
        start = 2 * rng.randint(-span // 2, span // 2) + rng.choice((0, 0, 1))
        blocks.append((k, start))
    U = direct_sum(*[block(p, k - 1, s) for k, s in blocks])
    # change of basis g_j in each degree: d'_j = g_{j+2} d_j g_j^{-1}
    g = {j: _random_invertible(n, p, rng) for j, n in U.dims.items()}
    ginv = {j: _inverse(m, p) for j, m in g.items()}
    d = {}
    for j in U.dims:
        if U.dim(j + 2):
            d[j] = la.matmul(la.matmul(g[j + 2], U.dmap(j), p), ginv[j], p)
    return PComplex(p, U.dims, d), sorted(blocks)


@dataclass(frozen=True)
class Block:
    length: int  # k, so the block is V_{k-1}
    start: int
    mult: int


@dataclass
class Decomposition:
    p: int
    blocks: List[Block]
    unclassified: List[Block] = field(default_factory=list)

    def as_dict(self) -> Dict[Tuple[int, int], int]:
        return {(b.length, b.start): b.mult for b in self.blocks}

    def nonfree(self) -> List[Block]:
        return [b for b in self.blocks if b.length < self.p]

    def to_json(self) -> dict:
        conv = lambda bs: [{"length": b.length, "start": b.start, "mult": b.mult} for b in bs]
        return {"blocks": conv(self.blocks), "unclassified": conv(self.unclassified)}


def _parity_edges(U: PComplex, j: int) -> Tuple[int, int]:
    """Lowest and highest window degree congruent to j mod 2."""
    lo = U.lo if (U.lo - j) % 2 == 0 else U.lo + 1
    hi = U.hi if (U.hi - j) % 2 == 0 else U.hi - 1
    return lo, hi


def decompose(U: PComplex) -> Decomposition:
    """Block multiplicities from the rank invariant.

    mult(k, j) = r(j, k-1) - r(j, k) - r(j-2, k) + r(j-2, k+1), r(j, k) = rank(d^k | U^j).
    A block of the windowed complex whose lower end sits on an open lower edge, or
    whose upper end sits on an open upper edge, may be a truncation and is set aside.
    """
    p = U.p
    found: List[Block] = []
    unclassified: List[Block] = []
    for j in U.degrees():
        for k in range(1, p + 1):
            m = U.rank(j, k - 1) - U.rank(j, k) - U.rank(j - 2, k) + U.rank(j - 2, k + 1)
            if m < 0:
                raise ArithmeticError("negative block multiplicity")
            if not m:
                continue
            lo_edge, hi_edge = _parity_edges(U, j)
            end = j + 2 * (k - 1)
            cut_low = U.open_low and j == lo_edge
            cut_high = U.open_high and end == hi_edge
            b = Block(k, j, m)
            if k < p and (cut_low or cut_high):
                unclassified.append(b)
            else:
                found.append(b)
    return Decomposition(p, found, unclassified)


def _check_k(U: PComplex, k: int, lo: int, hi: int) -> None:
    if not lo <= k <= hi:
        raise ValueError(f"cohomology index {k} outside [{lo}, {hi}]")


def slash_cohomology(U: PComplex, k: int) -> Dict[int, int]:
    """dim of ker d^{k+1} / (im d^{p-k-1} + ker d^k), degree by degree."""
    p = U.p
    _check_k(U, k, 0, p - 2)
    out = {}
    for j in U.degrees():
        jj = j - 2 * (p - k - 1)
        v = U.rank(j, k) - U.rank(j, k + 1) - U.rank(jj, p - 1)
        if v:
            out[j] = v
    return out


def backslash_cohomology(U: PComplex, k: int) -> Dict[int, int]:
    """dim of (im d^k intersect ker d^{p-k-1}) / im d^{k+1}."""
    p = U.p
    _check_k(U, k, 0, p - 1)
    out = {}
    for j in U.degrees():
        s = j - 2 * k
        v = U.rank(s, k) - U.rank(s, p - 1) - U.rank(s - 2, k + 1)
        if v:
            out[j] = v
    return out


def mayer_cohomology(U: PComplex, k: int) -> Dict[int, int]:
    """dim of ker d^k / im d^{p-k}."""
    p = U.p
    _check_k(U, k, 1, p - 1)
    out = {}
    for j in U.degrees():
        v = U.dim(j) - U.rank(j, k) - U.rank(j - 2 * (p - k), p - k)
        if v:
            out[j] = v
    return out


def exactness_defects(U: PComplex) -> Dict[Tuple[int, int], int]:
    """Alternating sums of 0 -> H_{\\p-k} -> _{k-1}H -> _kH -> H_{/k-1} -> 0; all zero when exact."""
    p = U.p
    bad = {}
    for k in range(1, p):
        a = backslash_cohomology(U, p - k)
        b = mayer_cohomology(U, k - 1) if k >= 2 else {}
        c = mayer_cohomology(U, k)
        e = slash_cohomology(U, k - 1)
        for j in U.degrees():
            v = a.get(j, 0) - b.get(j, 0) + c.get(j, 0) - e.get(j, 0)
            if v:
                bad[(k, j)] = v
    return bad


def tensor(U: PComplex, W: PComplex) -> PComplex:
    """U (x) W with d(u (x) w) = du (x) w + u (x) dw."""
    if U.p != W.p:
        raise ValueError("prime mismatch")
    p = U.p
    # ordered list of (a, b) summands for each total degree
    parts: Dict[int, List[Tuple[int, int]]] = {}
    for a in U.degrees():
        for b in W.degrees():
            parts.setdefault(a + b, []).append((a, b))
    dims = {j: sum(U.dim(a) * W.dim(b) for a, b in ab) for j, ab in parts.items()}

    def offsets(j):
        off, pos = {}, 0
        for a, b in parts.get(j, []):
            off[(a, b)] = pos
            pos += U.dim(a) * W.dim(b)
        return off

    d = {}
    for j, ab in parts.items():
        if not dims.get(j + 2):
            continue
        src, dst = offsets(j), offsets(j + 2)
        m = np.zeros((dims[j + 2], dims[j]), dtype=np.int64)
        for a, b in ab:
            c0 = src[(a, b)]
            n = U.dim(a) * W.dim(b)
            if (a + 2, b) in dst and U.dim(a + 2):
                blk = np.kron(U.dmap(a), np.eye(W.dim(b), dtype=np.int64))
                r0 = dst[(a + 2, b)]
                m[r0 : r0 + blk.shape[0], c0 : c0 + n] += blk
            if (a, b + 2) in dst and W.dim(b + 2):
                blk = np.kron(np.eye(U.dim(a), dtype=np.int64), W.dmap(b))
                r0 = dst[(a, b + 2)]
                m[r0 : r0 + blk.shape[0], c0 : c0 + n] += blk
        d[j] = np.mod(m, p)
    # beyond an open edge of either factor the product degrees are incomplete
    hi = min(
        [U.hi + W.hi]
        + ([U.hi + W.lo] if U.open_high else [])
        + ([U.lo + W.hi] if W.open_high else [])
    )
    lo = max(
        [U.lo + W.lo]
        + ([U.lo + W.hi] if U.open_low else [])
        + ([U.hi + W.lo] if W.open_low else [])
    )
    if lo > hi:
        raise ValueError("the windows leave no complete degree in the product")
    keep = lambda j: lo <= j <= hi
    dims = {j: n for j, n in dims.items() if keep(j)}
    d = {j: m for j, m in d.items() if keep(j) and keep(j + 2)}
    return PComplex(p, dims, d, U.open_low or W.open_low, U.open_high or W.open_high, (lo, hi))


def dual(U: PComplex) -> PComplex:
    """(U*)^m = (U^{-m})*, with d* = -transpose."""
    p = U.p
    dims = {-j: n for j, n in U.dims.items()}
    d = {}
    for j, m in U.d.items():
        # d: U^j -> U^{j+2} dualises to (U*)^{-j-2} -> (U*)^{-j}
        d[-j - 2] = np.mod(-m.T, p)
    return PComplex(p, dims, d, U.open_high, U.open_low, (-U.hi, -U.lo))


@dataclass
class SymbolResult:
    value: OElem
    verified: bool
    window: Tuple[int, int]
    band: Tuple[int, int]
    unclassified: int
    notes: str = ""

    def to_json(self) -> dict:
        return {
            "value": self.value.to_json(),
            "pretty": self.value.pretty(),
            "verified": self.verified,
            "window": list(self.window),
            "band": list(self.band),
            "unclassified_blocks": self.unclassified,
            "notes": self.notes,
        }


def symbol(U: PComplex, dec: Decomposition | None = None) -> SymbolResult:
    """Sum of q^start (k)_{q^2} over classified non-free blocks.

    Certification: every block starting at or below hi - 2(p-1) must be
    classified, and no non-free block may meet the top band of width 2p
    ending there. Finite complexes are always certified.
    """
    p = U.p
    if dec is None:
        dec = decompose(U)
    val = OElem.zero(p)
    for b in dec.nonfree():
        val = val + unbalanced_int(p, b.length) * o_reduce(p, {b.start: 1}) * b.mult
    exact_hi = U.hi - 2 * (p - 1) if U.open_high else U.hi
    band = (exact_hi - 2 * p + 1, exact_hi)
    ok = True
    notes = []
    stray = [b for b in dec.unclassified if b.start <= exact_hi]
    if stray:
        ok = False
        notes.append(f"{len(stray)} unclassified blocks below the top edge")
    if U.open_high:
        for b in dec.nonfree():
            top = b.start + 2 * (b.length - 1)
            if top >= band[0] and b.start <= band[1]:
                ok = False
                notes.append("cohomology in the certification band")
                break
    return SymbolResult(val, ok, (U.lo, U.hi), band, len(dec.unclassified), "; ".join(notes))


def is_contractible(U: PComplex) -> bool:
    """All blocks free; cross-checked against ker d = im d^{p-1} in every degree."""
    p = U.p
    dec = decompose(U)
    by_blocks = not dec.nonfree() and not dec.unclassified
    by_kernel = all(
        U.dim(j) - U.rank(j, 1) == U.rank(j - 2 * (p - 1), p - 1) for j in U.degrees()
    )
    if by_blocks != by_kernel:
        raise ArithmeticError("contractibility criteria disagree")
    return by_blocks


def _exact_degrees(U: PComplex) -> Iterable[int]:
    p = U.p
    lo = U.lo + 2 * (p - 1) if U.open_low else U.lo
    hi = U.hi - 2 * (p - 1) if U.open_high else U.hi
    return lo, hi


def quasi_isomorphic(U: PComplex, W: PComplex) -> bool:
    """Slash cohomologies agree in every k, over the degrees trusted in both windows."""
    if U.p != W.p:
        return False
    lo = max(_exact_degrees(U)[0], _exact_degrees(W)[0])
    hi = min(_exact_degrees(U)[1], _exact_degrees(W)[1])
    for k in range(U.p - 1):
        a, b = slash_cohomology(U, k), slash_cohomology(W, k)
        for j in set(a) | set(b):
            if lo <= j <= hi and a.get(j, 0) != b.get(j, 0):
                return False
    return True
