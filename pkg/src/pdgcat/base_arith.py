"""Polynomials over F_p with deg x_t = 2, the derivation x -> x^2, and divided differences."""

from __future__ import annotations

from itertools import combinations
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Exp = Tuple[int, ...]

__all__ = [
    "check_prime",
    "Poly",
    "derive",
    "derive_twisted",
    "iterate",
    "divided_difference",
    "longest_word",
    "longest_divided_difference",
    "apply_word",
    "elementary_symmetric",
    "linear_form",
]


def check_prime(p: int) -> int:
    """Return p if it is prime, else raise ValueError."""
    if not isinstance(p, int) or p < 2:
        raise ValueError(f"not a prime: {p!r}")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"not a prime: {p}")
        d += 1
    return p


class Poly:
    """Sparse polynomial in x_1..x_n over F_p.

    Terms map exponent tuples to residues in [1, p). Instances are treated
    as immutable; arithmetic always returns fresh objects.
    """

    __slots__ = ("p", "n", "terms")

    def __init__(self, p: int, n: int, terms: Mapping[Exp, int] | None = None):
        self.p = p
        self.n = n
        clean: Dict[Exp, int] = {}
        if terms:
            for e, c in terms.items():
                c %= p
                if c:
                    if len(e) != n:
                        raise ValueError("exponent length does not match nvars")
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, p: int, n: int, terms: Dict[Exp, int]) -> "Poly":
        obj = cls.__new__(cls)
        obj.p = p
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def zero(cls, p: int, n: int) -> "Poly":
        return cls._raw(p, n, {})

    @classmethod
    def const(cls, p: int, n: int, c: int = 1) -> "Poly":
        c %= p
        return cls._raw(p, n, {(0,) * n: c} if c else {})

    @classmethod
    def var(cls, p: int, n: int, t: int) -> "Poly":
        """x_t, 1-based."""
        e = [0] * n
        e[t - 1] = 1
        return cls._raw(p, n, {tuple(e): 1})

    @classmethod
    def monomial(cls, p: int, n: int, exps: Sequence[int], c: int = 1) -> "Poly":
        return cls(p, n, {tuple(exps): c})

    # basic protocol

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self == Poly.const(self.p, self.n, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.p == other.p and self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.p, self.n, frozenset(self.terms.items())))

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.p != self.p or other.n != self.n:
                raise ValueError("polynomial ring mismatch")
            return other
        if isinstance(other, int):
            return Poly.const(self.p, self.n, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        p = self.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(p, self.n, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        p = self.p
        return Poly._raw(p, self.n, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c: int) -> "Poly":
        c %= self.p
        if not c:
            return Poly.zero(self.p, self.n)
        p = self.p
        return Poly._raw(p, self.n, {e: v * c % p for e, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        p = self.p
        out: Dict[Exp, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return Poly._raw(p, self.n, {e: c for e, c in out.items() if c})

    def __rmul__(self, other) -> "Poly":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(self.p, self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def degree(self) -> int | None:
        """Common degree if homogeneous (deg x_t = 2), None for 0, ValueError if mixed."""
        degs = {2 * sum(e) for e in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("inhomogeneous polynomial")
        return degs.pop()

    def swap(self, t: int) -> "Poly":
        """The transposition x_t <-> x_{t+1}."""
        i = t - 1
        out = {}
        for e, c in self.terms.items():
            l = list(e)
            l[i], l[i + 1] = l[i + 1], l[i]
            out[tuple(l)] = c
        return Poly._raw(self.p, self.n, out)

    def permute_vars(self, perm: Sequence[int]) -> "Poly":
        """Substitute x_k -> x_{perm[k-1]} (perm is 1-based one-line notation)."""
        out = {}
        for e, c in self.terms.items():
            l = [0] * self.n
            for k, b in enumerate(e):
                l[perm[k] - 1] = b
            out[tuple(l)] = c
        return Poly._raw(self.p, self.n, out)

    def embed(self, n_total: int, offset: int) -> "Poly":
        """View as a polynomial in n_total variables, shifting x_t to x_{t+offset}."""
        pad_l = (0,) * offset
        pad_r = (0,) * (n_total - offset - self.n)
        return Poly._raw(self.p, n_total, {pad_l + e + pad_r: c for e, c in self.terms.items()})

    def coeff(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "nvars": self.n,
            "terms": [[list(e), c] for e, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "Poly":
        p = check_prime(int(obj["p"]))
        n = int(obj["nvars"])
        terms: Dict[Exp, int] = {}
        for e, c in obj["terms"]:
            e = tuple(int(b) for b in e)
            if len(e) != n or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {list(e)}")
            terms[e] = (terms.get(e, 0) + int(c)) % p
        return cls(p, n, terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"x{t + 1}" if b == 1 else f"x{t + 1}^{b}" for t, b in enumerate(e) if b
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def derive(f: Poly) -> Poly:
    """Leibniz derivation with d(x_t) = x_t^2, so d(x^b) = sum_t b_t x^{b + e_t}."""
    p = f.p
    out: Dict[Exp, int] = {}
    for e, c in f.terms.items():
        for t, b in enumerate(e):
            if b % p:
                l = list(e)
                l[t] += 1
                k = tuple(l)
                out[k] = (out.get(k, 0) + b * c) % p
    return Poly._raw(p, f.n, {e: c for e, c in out.items() if c})


def linear_form(p: int, coeffs: Sequence[int]) -> Poly:
    """sum_t c_t x_t."""
    n = len(coeffs)
    return Poly(p, n, {tuple(int(s == t) for s in range(n)): c for t, c in enumerate(coeffs)})


def derive_twisted(f: Poly, alpha: Sequence[int]) -> Poly:
    """Differential on Pol_n(alpha): f.1 -> (d f + f * sum alpha_t x_t).1."""
    if len(alpha) != f.n:
        raise ValueError("twist length does not match number of variables")
    return derive(f) + f * linear_form(f.p, alpha)


def iterate(op, f, k: int):
    for _ in range(k):
        f = op(f)
    return f


def divided_difference(t: int, f: Poly) -> Poly:
    """(f - s_t f)/(x_t - x_{t+1}) computed monomial by monomial.

    For a monomial with exponents (u, v) in positions (t, t+1) the quotient is
    sum x_t^i x_{t+1}^{u+v-1-i} over the range between v and u, with sign.
    """
    if not 1 <= t < f.n:
        raise ValueError(f"divided difference index {t} out of range for {f.n} variables")
    p = f.p
    i = t - 1
    out: Dict[Exp, int] = {}
    for e, c in f.terms.items():
        u, v = e[i], e[i + 1]
        if u == v:
            continue
        if u > v:
            lo, hi, sgn = v, u, c
        else:
            lo, hi, sgn = u, v, p - c
        s = u + v - 1
        for k in range(lo, hi):
            l = list(e)
            l[i] = k
            l[i + 1] = s - k
            key = tuple(l)
            out[key] = (out.get(key, 0) + sgn) % p
    return Poly._raw(p, f.n, {e: c for e, c in out.items() if c})


def _synthetic_quotient(t: int, f: Poly) -> Poly:
    """Reference division of f - s_t f by x_t - x_{t+1} via repeated leading-term removal."""
    p, n = f.p, f.n
    i = t - 1
    rem = dict((f - f.swap(t)).terms)
    quot: Dict[Exp, int] = {}
    while rem:
        # leading term in x_t-degree
        e = max(rem, key=lambda k: (k[i], k))
        c = rem[e]
        if e[i] == 0:
            raise ArithmeticError("divided difference: nonzero remainder")
        q = list(e)
        q[i] -= 1
        q = tuple(q)
        quot[q] = (quot.get(q, 0) + c) % p
        # subtract c * x^q * (x_t - x_{t+1})
        for shift, sc in ((i, 1), (i + 1, p - 1)):
            l = list(q)
            l[shift] += 1
            k = tuple(l)
            v = (rem.get(k, 0) - c * sc) % p
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return Poly(p, n, quot)


def longest_word(n: int) -> Tuple[int, ...]:
    """Reduced word s_1 (s_2 s_1) (s_3 s_2 s_1) ... for w_0 in S_n (leftmost letter applied last)."""
    word: list = []
    for k in range(1, n):
        word.extend(range(k, 0, -1))
    return tuple(word)


def apply_word(word: Iterable[int], f: Poly) -> Poly:
    """Apply delta_{w_1} ... delta_{w_r} to f (rightmost acts first)."""
    for t in reversed(tuple(word)):
        f = divided_difference(t, f)
        if not f:
            break
    return f


def longest_divided_difference(n: int, f: Poly, word: Sequence[int] | None = None) -> Poly:
    """delta(n) applied to f, through the fixed reduced word unless another is supplied."""
    if f.n < n:
        raise ValueError("polynomial has too few variables")
    return apply_word(longest_word(n) if word is None else word, f)


def elementary_symmetric(m: int, n: int, p: int, nvars: int | None = None) -> Poly:
    """e_m(x_1..x_n), optionally inside a ring with more variables."""
    if not 0 <= m <= n:
        raise ValueError(f"e_{m} undefined in {n} variables")
    nv = n if nvars is None else nvars
    terms = {}
    for S in combinations(range(n), m):
        e = [0] * nv
        for s in S:
            e[s] = 1
        terms[tuple(e)] = 1
    return Poly(p, nv, terms)
