"""The cyclotomic ring O_p = Z[q]/(1 + q^2 + ... + q^{2(p-1)}) and its quantum numbers."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence

from .base_arith import check_prime

__all__ = [
    "OElem",
    "o_reduce",
    "q_power",
    "quantum_int",
    "unbalanced_int",
    "quantum_factorial",
    "quantum_binom",
    "try_invert",
    "project",
    "psi_p",
    "psi_2p",
    "poly_mul",
    "poly_mod",
]


class OElem:
    """Canonical element of O_p: integer coefficients of q^0 .. q^{2p-3}."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        if len(coeffs) != 2 * p - 2:
            raise ValueError("coefficient vector must have length 2p-2")
        self.p = p
        self.coeffs = tuple(int(c) for c in coeffs)

    @classmethod
    def zero(cls, p: int) -> "OElem":
        return cls(p, [0] * (2 * p - 2))

    @classmethod
    def one(cls, p: int) -> "OElem":
        return o_reduce(p, {0: 1})

    def _coerce(self, other) -> "OElem":
        if isinstance(other, OElem):
            if other.p != self.p:
                raise ValueError("prime mismatch")
            return other
        if isinstance(other, int):
            return o_reduce(self.p, {0: other})
        raise TypeError(f"cannot combine OElem with {type(other).__name__}")

    def __add__(self, other) -> "OElem":
        other = self._coerce(other)
        return OElem(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "OElem":
        return OElem(self.p, [-a for a in self.coeffs])

    def __sub__(self, other) -> "OElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "OElem":
        return self._coerce(other) - self

    def __mul__(self, other) -> "OElem":
        other = self._coerce(other)
        acc: Dict[int, int] = {}
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        acc[i + j] = acc.get(i + j, 0) + a * b
        return o_reduce(self.p, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "OElem":
        if k < 0:
            inv = try_invert(self)
            if inv is None:
                raise ZeroDivisionError("not a unit")
            return inv ** (-k)
        out = OElem.one(self.p)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, OElem):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def shift(self, k: int) -> "OElem":
        """Multiply by q^k."""
        return self * q_power(self.p, k)

    def as_monomial(self) -> tuple | None:
        """(sign, k) if the element equals sign * q^k for some k in [1-p, p], else None."""
        p = self.p
        for k in range(-(p - 1), p + 1):
            for s in (1, -1):
                if self == q_power(p, k) * s:
                    return s, k
        return None

    def laurent(self, balanced: bool = True) -> Dict[int, int]:
        """Exponent -> coefficient.

        With balanced=True each parity class is shifted by a multiple of the
        defining relation to minimise the coefficient mass, and exponents are
        read in (-p, p].
        """
        p = self.p
        if not balanced:
            return {k: c for k, c in enumerate(self.coeffs) if c}
        out = {}
        for eps in (0, 1):
            slots = [self.coeffs[2 * k + eps] for k in range(p - 1)] + [0]
            t = -sorted(slots)[p // 2]
            for k, c in enumerate(slots):
                if c + t:
                    e = (2 * k + eps) % (2 * p)
                    out[e - 2 * p if e > p else e] = c + t
        return out

    def to_json(self) -> dict:
        return {"p": self.p, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "OElem":
        p = check_prime(int(obj["p"]))
        coeffs = [int(c) for c in obj["coeffs"]]
        return o_reduce(p, dict(enumerate(coeffs)))

    def pretty(self, balanced: bool = True) -> str:
        terms = sorted(self.laurent(balanced).items(), reverse=True)
        if not terms:
            return "0"
        out = []
        for e, c in terms:
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        first_sign, first = out[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"O{self.p}({self.pretty()})"


def o_reduce(p: int, laurent: Mapping[int, int]) -> OElem:
    """Canonical form of a Laurent polynomial: q^{2p} = 1, then divide by the defining relation."""
    top = 2 * p - 2
    acc = [0] * (2 * p)
    for e, c in laurent.items():
        acc[e % (2 * p)] += c
    # q^{2p-2} = -(1 + q^2 + ... + q^{2p-4}) and q^{2p-1} = q * q^{2p-2}
    for e in (2 * p - 1, 2 * p - 2):
        c = acc[e]
        if c:
            acc[e] = 0
            base = e - top
            for k in range(p - 1):
                acc[base + 2 * k] -= c
    return OElem(p, acc[:top])


def q_power(p: int, k: int) -> OElem:
    return o_reduce(p, {k: 1})


def quantum_int(p: int, n: int) -> OElem:
    """[n] = q^{n-1} + q^{n-3} + ... + q^{1-n}."""
    if n < 0:
        raise ValueError("quantum integer needs n >= 0")
    return o_reduce(p, {n - 1 - 2 * k: 1 for k in range(n)})


def unbalanced_int(p: int, n: int) -> OElem:
    """(n)_{q^2} = 1 + q^2 + ... + q^{2(n-1)}.

    Negative n is read through its residue mod p; this agrees with
    (1 - q^{2n})/(1 - q^2) because q^{2p} = 1.
    """
    n %= p
    return o_reduce(p, {2 * k: 1 for k in range(n)})


def quantum_factorial(p: int, n: int) -> OElem:
    out = OElem.one(p)
    for k in range(1, n + 1):
        out = out * quantum_int(p, k)
    return out


def quantum_binom(p: int, m: int, n: int) -> OElem:
    """[m brack n] = [m]! / ([n]! [m-n]!), with the denominators inverted in O_p."""
    if not 0 <= n <= m:
        raise ValueError("quantum binomial needs 0 <= n <= m")
    if n > p - 1 or m - n > p - 1:
        raise ValueError("quantum binomial outside the unit range")
    if n == 0 or n == m:
        return OElem.one(p)
    if m >= p:
        return OElem.zero(p)
    den = quantum_factorial(p, n) * quantum_factorial(p, m - n)
    inv = try_invert(den)
    if inv is None:
        raise ArithmeticError("denominator is not a unit")
    return quantum_factorial(p, m) * inv


def _mult_matrix(x: OElem) -> List[List[int]]:
    """Column k is x * q^k."""
    d = 2 * x.p - 2
    cols = [(x * q_power(x.p, k)).coeffs for k in range(d)]
    return [[cols[k][r] for k in range(d)] for r in range(d)]


def _solve_rational(a: List[List[int]], b: List[int]) -> List[Fraction] | None:
    """Solve a square system over Q; None if singular."""
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [v / pv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [vr - f * vc for vr, vc in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def try_invert(x: OElem) -> OElem | None:
    """Inverse in O_p if it exists (solve the multiplication-by-x system over Z)."""
    sol = _solve_rational(_mult_matrix(x), list(OElem.one(x.p).coeffs))
    if sol is None or any(v.denominator != 1 for v in sol):
        return None
    return OElem(x.p, [int(v) for v in sol])


# integer polynomial helpers (coefficient lists, index = exponent)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_mod(a: Sequence[int], monic: Sequence[int]) -> List[int]:
    """Remainder of a modulo a monic integer polynomial."""
    a = list(a)
    d = len(monic) - 1
    for k in range(len(a) - 1, d - 1, -1):
        c = a[k]
        if c:
            for i, m in enumerate(monic):
                a[k - d + i] -= c * m
    out = a[:d] + [0] * max(0, d - len(a))
    return out


def psi_p(p: int) -> List[int]:
    """1 + q + ... + q^{p-1}."""
    return [1] * p


def psi_2p(p: int) -> List[int]:
    """1 - q + q^2 - ... + q^{p-1}, i.e. psi_p(-q)."""
    return [(-1) ** i for i in range(p)]


def project(x: OElem, target: str):
    """Reduce into Z[q]/psi_p, Z[q]/psi_2p (coefficient lists) or evaluate at q = 1 in F_p."""
    if target == "F_p":
        return sum(x.coeffs) % x.p
    if target == "O_p":
        return poly_mod(x.coeffs, psi_p(x.p))
    if target == "O_2p":
        return poly_mod(x.coeffs, psi_2p(x.p))
    raise ValueError(f"unknown projection target {target!r}")


def sum_elems(p: int, items: Iterable[OElem]) -> OElem:
    out = OElem.zero(p)
    for x in items:
        out = out + x
    return out
