"""The nilHecke algebra NH_n over F_p with the differentials d_a.

Elements are sums f_w * delta_w with the polynomial on top, and delta_w
read off the lexicographically smallest reduced word of w. Products are
top-to-bottom: x * y stacks x above y.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from . import linalg_fp as la
from . import perms as P
from .base_arith import (
    Poly,
    apply_word,
    check_prime,
    derive,
    derive_twisted,
    divided_difference,
    elementary_symmetric,
    linear_form,
)
from .oring import OElem, q_power, try_invert
from .pcomplex import PComplex, SymbolResult, decompose, symbol, tensor

__all__ = [
    "NHElem",
    "TwistedModuleElem",
    "nh_one",
    "nh_poly",
    "staircase",
    "sideways",
    "nh_x",
    "nh_delta",
    "nh_delta_w",
    "delta_n",
    "epsilon",
    "nh_normalize",
    "nh_mul",
    "nh_act",
    "nh_derive",
    "nh_check_pnilpotent",
    "nh_involution",
    "matrix_basis",
    "alpha_plus",
    "alpha_minus",
    "module_derive",
    "nh_find_contraction",
    "nh_as_pcomplex",
    "nh_symbol",
    "twisted_pol_complex",
    "pplus_complex",
    "twisted_restriction_twist",
    "nh_twisted_restriction_symbol",
    "induction_filtration",
    "nh_induction_symbol",
    "INDUCTION_SHIFT",
]

Perm = P.Perm


class NHElem:
    """sum_w f_w delta_w in NH_n over F_p."""

    __slots__ = ("p", "n", "terms")

    def __init__(self, p: int, n: int, terms: Mapping[Perm, Poly] | None = None):
        self.p = p
        self.n = n
        self.terms: Dict[Perm, Poly] = {}
        for w, f in (terms or {}).items():
            if f:
                if f.n != n or f.p != p:
                    raise ValueError("coefficient ring mismatch")
                self.terms[tuple(w)] = f

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check(self, other: "NHElem") -> None:
        if other.p != self.p or other.n != self.n:
            raise ValueError("nilHecke algebras differ")

    def __add__(self, other: "NHElem") -> "NHElem":
        self._check(other)
        out = dict(self.terms)
        for w, f in other.terms.items():
            out[w] = out[w] + f if w in out else f
        return NHElem(self.p, self.n, out)

    def __neg__(self) -> "NHElem":
        return NHElem(self.p, self.n, {w: -f for w, f in self.terms.items()})

    def __sub__(self, other: "NHElem") -> "NHElem":
        return self + (-other)

    def scale(self, c: int) -> "NHElem":
        return NHElem(self.p, self.n, {w: f.scale(c) for w, f in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return nh_mul(self, other)

    def __rmul__(self, c: int) -> "NHElem":
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NHElem):
            return NotImplemented
        return self.p == other.p and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, self.n, frozenset((w, hash(f)) for w, f in self.terms.items())))

    def left_poly(self, f: Poly) -> "NHElem":
        """f * self (polynomials sit on top, so no rewriting is needed)."""
        return NHElem(self.p, self.n, {w: f * g for w, g in self.terms.items()})

    def degrees(self) -> set:
        out = set()
        for w, f in self.terms.items():
            for e in f.terms:
                out.add(2 * sum(e) - 2 * P.length(w))
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "terms": [
                {"perm": list(w), "poly": f.to_json()} for w, f in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "NHElem":
        p = check_prime(int(obj["p"]))
        n = int(obj["n"])
        out = NHElem(p, n)
        for t in obj["terms"]:
            w = tuple(int(v) for v in t["perm"])
            if sorted(w) != list(range(1, n + 1)):
                raise ValueError(f"not a permutation of 1..{n}: {list(w)}")
            out = out + NHElem(p, n, {w: Poly.from_json(t["poly"])})
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, f in sorted(self.terms.items(), key=lambda kv: (P.length(kv[0]), kv[0])):
            word = P.reduced_word(w)
            d = "".join(f"d{t}" for t in word)
            parts.append(f"({f})" + (f"*{d}" if d else ""))
        return " + ".join(parts)


# constructors


def nh_one(p: int, n: int) -> NHElem:
    return NHElem(p, n, {P.identity(n): Poly.const(p, n, 1)})


def nh_poly(f: Poly) -> NHElem:
    return NHElem(f.p, f.n, {P.identity(f.n): f})


def nh_x(p: int, n: int, t: int) -> NHElem:
    return nh_poly(Poly.var(p, n, t))


def nh_delta(p: int, n: int, t: int) -> NHElem:
    return NHElem(p, n, {P.from_word((t,), n): Poly.const(p, n, 1)})


def nh_delta_w(p: int, n: int, w: Perm) -> NHElem:
    return NHElem(p, n, {tuple(w): Poly.const(p, n, 1)})


def delta_n(p: int, n: int) -> NHElem:
    """delta(n), the longest crossing."""
    return nh_delta_w(p, n, P.longest(n))


def staircase(p: int, n: int, nvars: int | None = None, offset: int = 0) -> Poly:
    """x_2 x_3^2 ... x_n^{n-1} (shifted by offset inside nvars variables)."""
    nv = n if nvars is None else nvars
    e = [0] * nv
    for t in range(n):
        e[offset + t] = t
    return Poly.monomial(p, nv, e)


def epsilon(p: int, n: int) -> NHElem:
    """epsilon_n = (-1)^{n(n-1)/2} delta(n) x_2 x_3^2 ... x_n^{n-1}."""
    sign = (-1) ** (n * (n - 1) // 2)
    return (delta_n(p, n) * nh_poly(staircase(p, n))).scale(sign)


# multiplication


@lru_cache(maxsize=200000)
def _push_monomial(p: int, n: int, u: Perm, exps: Tuple[int, ...]) -> Tuple[Tuple[Perm, Poly], ...]:
    """delta_u * x^exps rewritten as sum h_w delta_w (w a subword product of u)."""
    state: Dict[Perm, Poly] = {P.identity(n): Poly.monomial(p, n, exps)}
    for t in reversed(P.reduced_word(u)):
        new: Dict[Perm, Poly] = {}
        for w, h in state.items():
            if P.lengthens_left(t, w):
                w2 = P.left_mul(t, w)
                sh = h.swap(t)
                new[w2] = new[w2] + sh if w2 in new else sh
            dh = divided_difference(t, h)
            if dh:
                new[w] = new[w] + dh if w in new else dh
        state = {w: h for w, h in new.items() if h}
    return tuple(state.items())


def push_poly(p: int, n: int, u: Perm, g: Poly) -> Dict[Perm, Poly]:
    out: Dict[Perm, Poly] = {}
    for e, c in g.terms.items():
        for w, h in _push_monomial(p, n, u, e):
            h = h.scale(c)
            out[w] = out[w] + h if w in out else h
    return out


def nh_mul(x: NHElem, y: NHElem) -> NHElem:
    """Normal form of x stacked on top of y."""
    x._check(y)
    p, n = x.p, x.n
    acc: Dict[Perm, Poly] = {}
    for u, f in x.terms.items():
        lu = P.length(u)
        for v, g in y.terms.items():
            lv = P.length(v)
            for w, h in push_poly(p, n, u, g).items():
                wv = P.compose(w, v)
                if P.length(wv) != P.length(w) + lv:
                    continue
                term = f * h
                acc[wv] = acc[wv] + term if wv in acc else term
    return NHElem(p, n, acc)


_TOKEN = re.compile(r"^(d|x)(\d+)(?:\^(\d+))?$")


def nh_normalize(word, p: int, n: int) -> NHElem:
    """Normal form of a product of generators, given as 'd1 x1 d2 x3^2' or a token list."""
    tokens = word.split() if isinstance(word, str) else list(word)
    out = nh_one(p, n)
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse generator {tok!r}")
        kind, idx, power = m.group(1), int(m.group(2)), int(m.group(3) or 1)
        if kind == "d":
            if not 1 <= idx < n:
                raise ValueError(f"crossing index {idx} out of range for {n} strands")
            g = nh_delta(p, n, idx)
        else:
            if not 1 <= idx <= n:
                raise ValueError(f"dot index {idx} out of range for {n} strands")
            g = nh_poly(Poly.var(p, n, idx) ** power)
            power = 1
        for _ in range(power):
            out = nh_mul(out, g)
    return out


# polynomial representation


@dataclass(frozen=True)
class TwistedModuleElem:
    """An element f.1_alpha of Pol_n(alpha)."""

    p: int
    n: int
    alpha: Tuple[int, ...]
    value: Poly

    def __post_init__(self):
        if len(self.alpha) != self.n:
            raise ValueError("twist length must equal n")
        diffs = {(self.alpha[t + 1] - self.alpha[t]) % self.p for t in range(self.n - 1)}
        if len(diffs) > 1:
            raise ValueError("twist differences must be constant")

    @property
    def a(self) -> int:
        return (self.alpha[1] - self.alpha[0]) % self.p if self.n > 1 else 0


def alpha_plus(n: int, p: int) -> Tuple[int, ...]:
    return tuple((t - n) % p for t in range(1, n + 1))


def alpha_minus(n: int, p: int) -> Tuple[int, ...]:
    return tuple((1 - t) % p for t in range(1, n + 1))


def nh_act(x: NHElem, m: TwistedModuleElem) -> TwistedModuleElem:
    if x.p != m.p or x.n != m.n:
        raise ValueError("module and algebra differ")
    out = Poly.zero(m.p, m.n)
    for w, f in x.terms.items():
        out = out + f * apply_word(P.reduced_word(w), m.value)
    return TwistedModuleElem(m.p, m.n, m.alpha, out)


def module_derive(m: TwistedModuleElem) -> TwistedModuleElem:
    return TwistedModuleElem(m.p, m.n, m.alpha, derive_twisted(m.value, m.alpha))


# differentials


def _d_generator(p: int, n: int, t: int, a: int) -> NHElem:
    """d_a(delta_t) = a - (a+1) x_t delta_t + (a-1) x_{t+1} delta_t."""
    w = P.from_word((t,), n)
    lin = linear_form(p, [(-(a + 1)) if s == t - 1 else (a - 1) if s == t else 0 for s in range(n)])
    return NHElem(p, n, {P.identity(n): Poly.const(p, n, a), w: lin})


@lru_cache(maxsize=None)
def _d_delta_w(p: int, n: int, w: Perm, a: int) -> NHElem:
    word = P.reduced_word(w)
    out = NHElem(p, n)
    for k, t in enumerate(word):
        left = nh_delta_w(p, n, P.from_word(word[:k], n))
        right = nh_delta_w(p, n, P.from_word(word[k + 1 :], n))
        out = out + nh_mul(nh_mul(left, _d_generator(p, n, t, a)), right)
    return out


def nh_derive(x: NHElem, a: int) -> NHElem:
    """Leibniz extension of d_a(x_t) = x_t^2 and the crossing rule above."""
    p, n = x.p, x.n
    a %= p
    out: Dict[Perm, Poly] = {}
    for w, f in x.terms.items():
        df = derive(f)
        if df:
            out[w] = out[w] + df if w in out else df
        if P.length(w):
            for v, g in _d_delta_w(p, n, w, a).terms.items():
                h = f * g
                out[v] = out[v] + h if v in out else h
    return NHElem(p, n, out)


def nh_check_pnilpotent(n: int, a: int, p: int) -> bool:
    """d_a^p kills every generator x_t and delta_t of NH_n."""
    gens = [nh_x(p, n, t) for t in range(1, n + 1)] + [nh_delta(p, n, t) for t in range(1, n)]
    for g in gens:
        for _ in range(p):
            g = nh_derive(g, a)
            if not g.terms:
                break
        if g.terms:
            return False
    return True


def nh_involution(x: NHElem, which: str) -> NHElem:
    """psi flips top and bottom (anti-automorphism); sigma mirrors left-right with a sign per crossing."""
    p, n = x.p, x.n
    out = NHElem(p, n)
    if which == "psi":
        for w, f in x.terms.items():
            out = out + nh_mul(nh_delta_w(p, n, P.inverse(w)), nh_poly(f))
        return out
    if which == "sigma":
        rev = tuple(range(n, 0, -1))
        for w, f in x.terms.items():
            word = P.reduced_word(w)
            w2 = P.from_word([n - t for t in word], n)
            sign = (-1) ** len(word)
            out = out + NHElem(p, n, {w2: f.permute_vars(rev).scale(sign)})
        return out
    raise ValueError(f"unknown involution {which!r}")


# matrix basis over the symmetric functions


def sq(n: int) -> List[Tuple[int, ...]]:
    return list(product(*[range(t + 1) for t in range(1, n)]))


def matrix_basis(p: int, n: int) -> Dict[Tuple[tuple, tuple], NHElem]:
    """E_{alpha,beta} = (-1)^{|beta hat|} e_alpha delta(n) x^{beta hat}."""
    out = {}
    for alpha in sq(n):
        e_a = Poly.const(p, n, 1)
        for t, k in enumerate(alpha, start=1):
            e_a = e_a * elementary_symmetric(k, t, p, n)
        for beta in sq(n):
            hat = [t - b for t, b in enumerate(beta, start=1)]
            x_hat = Poly.monomial(p, n, [0] + hat)
            sign = (-1) ** sum(hat)
            out[(alpha, beta)] = (nh_poly(e_a) * delta_n(p, n) * nh_poly(x_hat)).scale(sign)
    return out


# graded pieces


def _monomials(nvars: int, total: int) -> List[Tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(nvars), total):
        e = [0] * nvars
        for c in combo:
            e[c] += 1
        out.append(tuple(e))
    return out


def nh_basis(n: int, degree: int, max_len: int | None = None) -> List[Tuple[Perm, Tuple[int, ...]]]:
    """Basis x^b delta_w of the given degree (2|b| - 2 l(w))."""
    out = []
    for w in P.all_perms(n):
        l = P.length(w)
        if max_len is not None and l > max_len:
            continue
        twice = degree + 2 * l
        if twice < 0 or twice % 2:
            continue
        for e in _monomials(n, twice // 2):
            out.append((w, e))
    return out


def _coords(x: NHElem, index: Mapping[Tuple[Perm, Tuple[int, ...]], int], size: int) -> np.ndarray:
    v = np.zeros(size, dtype=np.int64)
    for w, f in x.terms.items():
        for e, c in f.terms.items():
            v[index[(w, e)]] = c
    return v


def _derive_basis(p: int, n: int, a: int, w: Perm, e: Tuple[int, ...]) -> NHElem:
    return nh_derive(NHElem(p, n, {w: Poly.monomial(p, n, e)}), a)


def _solve_unit(p: int, n: int, imgs: List[NHElem]):
    """Coefficients c with sum c_k imgs[k] = 1, or None."""
    one = (P.identity(n), (0,) * n)
    keys = sorted({(w, e) for x in imgs for w, f in x.terms.items() for e in f.terms} | {one})
    index = {k: i for i, k in enumerate(keys)}
    mat = np.array([_coords(x, index, len(keys)) for x in imgs], dtype=np.int64).T
    rhs = np.zeros(len(keys), dtype=np.int64)
    rhs[index[one]] = 1
    return la.solve(mat, rhs, p)


def _combine(p: int, n: int, sol, basis) -> NHElem:
    out = NHElem(p, n)
    for c, (w, e) in zip(sol, basis):
        if c:
            out = out + NHElem(p, n, {w: Poly.monomial(p, n, e, int(c))})
    return out


def nh_find_contraction(
    n: int, a: int, p: int, degree_bound: int | None = None
) -> NHElem | None:
    """An element y of degree -2 with d_a(y) = 1, or None.

    If d(y) = 1 then d(y^k) = k y^{k-1}, so 1 = d^{p-1}(y^{p-1}/(p-1)!); a
    witness exists iff 1 lies in the image of d^{p-1} on degree -2(p-1), and
    then y = d^{p-2}(z). That system has far fewer unknowns, so it is tried
    first for crossing bounds L = 1, 2, ... (d_a never adds crossings). A
    None answer always comes from the degree -2 system itself, over all
    elements with at most degree_bound crossings (default: no bound).
    """
    a %= p
    top = n * (n - 1) // 2
    bound = top if degree_bound is None else min(degree_bound, top)
    if n < 2:
        return None
    for L in range(1, bound + 1):
        src = nh_basis(n, -2 * (p - 1), max_len=L)
        if not src:
            continue
        imgs = []
        for w, e in src:
            x = NHElem(p, n, {w: Poly.monomial(p, n, e)})
            for _ in range(p - 1):
                x = nh_derive(x, a)
            imgs.append(x)
        sol = _solve_unit(p, n, imgs)
        if sol is not None:
            y = _combine(p, n, sol, src)
            for _ in range(p - 2):
                y = nh_derive(y, a)
            if nh_derive(y, a) != nh_one(p, n):
                raise ArithmeticError("contraction witness failed to verify")
            return y
    src = nh_basis(n, -2, max_len=bound)
    sol = _solve_unit(p, n, [_derive_basis(p, n, a, w, e) for w, e in src]) if src else None
    if sol is None:
        return None
    return _combine(p, n, sol, src)


def default_window(n: int, p: int) -> Tuple[int, int]:
    lo = n * (1 - n)
    return lo, lo + 6 * p


def nh_as_pcomplex(n: int, a: int, p: int, window: Tuple[int, int] | None = None) -> PComplex:
    """NH_n with d_a, materialised on a degree window."""
    a %= p
    lo, hi = window or default_window(n, p)
    bases = {j: nh_basis(n, j) for j in range(lo, hi + 1)}
    dims = {j: len(b) for j, b in bases.items() if b}
    d = {}
    for j in dims:
        if j + 2 > hi or not dims.get(j + 2):
            continue
        index = {b: i for i, b in enumerate(bases[j + 2])}
        cols = [_coords(_derive_basis(p, n, a, w, e), index, dims[j + 2]) for w, e in bases[j]]
        d[j] = np.array(cols, dtype=np.int64).T
    return PComplex(p, dims, d, open_low=lo > n * (1 - n), open_high=True, window=(lo, hi))


def nh_symbol(n: int, a: int, p: int, window: Tuple[int, int] | None = None) -> SymbolResult:
    return symbol(nh_as_pcomplex(n, a, p, window))


# twisted polynomial modules as p-complexes


def twisted_pol_complex(
    p: int, alpha: Sequence[int], gen_degree: int, height: int, derive_fn=None
) -> PComplex:
    """Pol_N(alpha) with generator in gen_degree, materialised up to gen_degree + height.

    derive_fn(exps) may supply the differential of a basis monomial as a Poly;
    by default it is the twisted derivation.
    """
    N = len(alpha)
    if derive_fn is None:
        derive_fn = lambda e: derive_twisted(Poly.monomial(p, N, e), alpha)
    dims, d, bases = {}, {}, {}
    for k in range(height // 2 + 1):
        bases[k] = _monomials(N, k)
        dims[gen_degree + 2 * k] = len(bases[k])
    for k in range(height // 2):
        index = {e: i for i, e in enumerate(bases[k + 1])}
        m = np.zeros((len(bases[k + 1]), len(bases[k])), dtype=np.int64)
        for c, e in enumerate(bases[k]):
            for e2, v in derive_fn(e).terms.items():
                m[index[e2], c] = v
        d[gen_degree + 2 * k] = m
    window = (gen_degree, gen_degree + 2 * (height // 2))
    return PComplex(p, dims, d, open_low=False, open_high=True, window=window)


def pplus_complex(n: int, p: int, height: int) -> PComplex:
    """P+_n = Pol_n(alpha+) with generator in degree n(1-n)/2."""
    return twisted_pol_complex(p, alpha_plus(n, p), n * (1 - n) // 2, height)


def twisted_restriction_twist(n: int, m: int, p: int) -> Tuple[int, ...]:
    """Twist inherited by the generator (x_1...x_n)^m of P+_{n+m}.

    The inherited differential of X = (x_1...x_n)^m . 1 is divided by X; the
    quotient must be a linear form, whose coefficients are returned.
    """
    N = n + m
    X = Poly.monomial(p, N, [m] * n + [0] * m)
    dX = derive_twisted(X, alpha_plus(N, p))
    lin = {}
    for e, c in dX.terms.items():
        q = [b - x for b, x in zip(e, [m] * n + [0] * m)]
        if min(q) < 0 or sum(q) != 1:
            raise ArithmeticError("inherited differential is not a twist")
        lin[q.index(1)] = c
    return tuple(lin.get(t, 0) for t in range(N))


def nh_twisted_restriction_symbol(
    n: int, m: int, p: int, height: int | None = None
) -> Tuple[OElem, bool]:
    """Symbol of the twisted restriction of P+_{n+m}, relative to [P+_n (x) P+_m].

    The twisted module is the submodule (x_1...x_n)^m P+_{n+m} with its inherited
    differential, regraded so that its generator sits where the generator of
    P+_{n+m} does (the twisting bimodule is generated in degree 0). Both sides
    are windowed complexes; the flag reports whether both symbols were certified.
    """
    N = n + m
    if N > p - 1 or n < 0 or m < 0:
        raise ValueError("need n + m <= p - 1")
    height = height if height is not None else 4 * p + 2 * N + 2
    X = [m] * n + [0] * m

    def inherited(e):
        f = Poly.monomial(p, N, [b + x for b, x in zip(e, X)])
        df = derive_twisted(f, alpha_plus(N, p))
        return Poly(p, N, {tuple(b - x for b, x in zip(k, X)): c for k, c in df.terms.items()})

    res = twisted_pol_complex(p, [0] * N, N * (1 - N) // 2, height, derive_fn=inherited)
    left = symbol(res)
    if n == 0 or m == 0:
        right = symbol(pplus_complex(N, p, height))
    else:
        right = symbol(tensor(pplus_complex(n, p, height), pplus_complex(m, p, height)))
    inv = try_invert(right.value)
    if inv is None:
        raise ArithmeticError("symbol of P+_n (x) P+_m is not a unit")
    return left.value * inv, left.verified and right.verified


# induction


def _coset_reps(n: int, m: int) -> List[Perm]:
    """Minimal length representatives u of S_{n+m}/(S_n x S_m)."""
    N = n + m
    return [
        w for w in P.all_perms(N)
        if all(w[i] < w[i + 1] for i in range(n - 1)) and all(w[i] < w[i + 1] for i in range(n, N - 1))
    ]


def sideways(x: NHElem, y: NHElem) -> NHElem:
    """x placed to the left of y in NH_{n+m}."""
    p, n, m = x.p, x.n, y.n
    N = n + m
    out: Dict[Perm, Poly] = {}
    for u, f in x.terms.items():
        for v, g in y.terms.items():
            w = tuple(u) + tuple(n + k for k in v)
            out[w] = f.embed(N, 0) * g.embed(N, n)
    return NHElem(p, N, out)


INDUCTION_SHIFT = 0  # q-power found at (n, m) = (1, 1); frozen here and in the tests


def induction_filtration(n: int, m: int, p: int) -> List[Tuple[int, Tuple[int, ...]]]:
    """Filtration data of NH_{n+m} e, e = eps_n (x) eps_m, by number of crossings.

    NH_{n+m} e is free over Pol_{n+m} on delta_u e (u minimal coset
    representatives), and d_1 is triangular in the crossing length. Each
    subquotient is a twisted module Pol(alpha_u) generated in degree -2 l(u);
    the list holds (degree, alpha_u) with alpha_u read off the diagonal.
    """
    N = n + m
    e = sideways(epsilon(p, n), epsilon(p, m)) if n and m else epsilon(p, N)
    out = []
    reps = _coset_reps(n, m)
    for u in reps:
        gen = nh_mul(nh_delta_w(p, N, u), e)
        dgen = nh_derive(gen, 1)
        # peel off the leading crossings: gen has top term delta_{u w_{n,m}} times a monomial
        top_w = max(gen.terms, key=P.length)
        lead = gen.terms[top_w]
        dlead = dgen.terms.get(top_w, Poly.zero(p, N))
        # dgen = (lin) * gen + lower, so on the top crossing: dlead = lin * lead
        lin = _divide_exact(dlead, lead)
        coeffs = tuple(lin.coeff([int(s == t) for s in range(N)]) for t in range(N))
        if linear_form(p, coeffs) != lin:
            raise ArithmeticError("diagonal part of the differential is not linear")
        out.append((-2 * P.length(u), coeffs))
    return out


def _divide_exact(f: Poly, g: Poly) -> Poly:
    """f / g where g is a monomial times a unit."""
    if len(g.terms) != 1:
        raise ArithmeticError("divisor must be a monomial")
    (ge, gc), = g.terms.items()
    inv = pow(gc, g.p - 2, g.p)
    out = {}
    for e, c in f.terms.items():
        q = tuple(a - b for a, b in zip(e, ge))
        if min(q) < 0:
            raise ArithmeticError("inexact division")
        out[q] = c * inv
    return Poly(f.p, f.n, out)


def _pol_symbol(p: int, alpha: Sequence[int]) -> OElem:
    """[Pol_N(alpha)] = prod_t (p + 1 - alpha_t)_{q^2} with the generator in degree 0."""
    from .oring import unbalanced_int

    out = OElem.one(p)
    for t in alpha:
        out = out * unbalanced_int(p, p + 1 - (t % p) if t % p else 1)
    return out


def nh_induction_symbol(
    n: int, m: int, p: int, window: Tuple[int, int] | None = None
) -> Tuple[OElem, bool]:
    """[Ind(P+_n (x) P+_m)] / [P+_{n+m}] with Ind(P+_n (x) P+_m) = NH_{n+m} e shifted by n(1-n)/2 + m(1-m)/2.

    Without a window the symbol is summed over the crossing filtration (exact).
    With a window the module NH_{n+m} e is materialised degree by degree
    and its symbol certified as for any windowed complex.
    """
    N = n + m
    if N > p - 1:
        raise ValueError("need n + m <= p - 1")
    shift = n * (1 - n) // 2 + m * (1 - m) // 2
    if window is None:
        total = OElem.zero(p)
        for deg, alpha in induction_filtration(n, m, p):
            total = total + q_power(p, deg) * _pol_symbol(p, alpha)
        verified = True
    else:
        res = symbol(induced_complex(n, m, p, window))
        total, verified = res.value, res.verified
    pplus = q_power(p, N * (1 - N) // 2) * _pol_symbol(p, alpha_plus(N, p))
    inv = try_invert(pplus)
    if inv is None:
        raise ArithmeticError("[P+] is not a unit")
    return total * q_power(p, shift + INDUCTION_SHIFT) * inv, verified


def induced_complex(n: int, m: int, p: int, window: Tuple[int, int]) -> PComplex:
    """NH_{n+m} e on a window, in the basis x^b delta_u e (u minimal coset representatives)."""
    N = n + m
    e = sideways(epsilon(p, n), epsilon(p, m)) if n and m else epsilon(p, N)
    reps = _coset_reps(n, m)
    gens = {u: nh_mul(nh_delta_w(p, N, u), e) for u in reps}
    # express d(delta_u e) in the basis: peel leading crossings
    lead = {u: max(g.terms, key=P.length) for u, g in gens.items()}
    by_top = {lead[u]: u for u in reps}

    def expand(x: NHElem) -> Dict[Perm, Poly]:
        coeffs: Dict[Perm, Poly] = {}
        x = NHElem(p, N, dict(x.terms))
        while x.terms:
            top = max(x.terms, key=lambda w: (P.length(w), w))
            u = by_top.get(top)
            if u is None:
                raise ArithmeticError("element is not in the left ideal")
            c = _divide_exact(x.terms[top], gens[u].terms[top])
            coeffs[u] = coeffs[u] + c if u in coeffs else c
            x = x - gens[u].left_poly(c)
        return coeffs

    dgen = {u: expand(nh_derive(g, 1)) for u, g in gens.items()}
    lo, hi = window
    bases = {}
    for j in range(lo, hi + 1):
        b = []
        for u in reps:
            twice = j + 2 * P.length(u)
            if twice >= 0 and twice % 2 == 0:
                b.extend((u, ex) for ex in _monomials(N, twice // 2))
        if b:
            bases[j] = b
    dims = {j: len(b) for j, b in bases.items()}
    d = {}
    for j, b in bases.items():
        if j + 2 > hi or j + 2 not in bases:
            continue
        index = {k: i for i, k in enumerate(bases[j + 2])}
        mat = np.zeros((dims[j + 2], dims[j]), dtype=np.int64)
        for c, (u, ex) in enumerate(b):
            mono = Poly.monomial(p, N, ex)
            img = {u: derive(mono)}
            for v, h in dgen[u].items():
                img[v] = img[v] + mono * h if v in img else mono * h
            for v, h in img.items():
                for e2, val in h.terms.items():
                    mat[index[(v, e2)], c] = (mat[index[(v, e2)], c] + val) % p
        d[j] = mat
    min_deg = -2 * max(P.length(u) for u in reps)
    return PComplex(p, dims, d, open_low=lo > min_deg, open_high=True, window=(lo, hi))
