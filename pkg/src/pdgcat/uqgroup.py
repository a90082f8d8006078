"""The twisted bialgebra u+ of small quantum sl2 over O_p, in the divided power basis."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence

from .base_arith import check_prime
from .oring import OElem, project, q_power, quantum_binom

__all__ = [
    "UPlusElem",
    "UPlusTensorElem",
    "divided_power",
    "u_mul",
    "u_comul",
    "u_counit",
    "twisted_tensor_mul",
    "TWIST",
    "verify_bialgebra",
    "categorification_crosscheck",
    "binomial_table",
]


def _binom(p: int, m: int, n: int) -> OElem:
    return quantum_binom(p, m, n) if m < p else OElem.zero(p)


class UPlusElem:
    """sum_n c_n E^(n), n = 0 .. p-1."""

    def __init__(self, p: int, coeffs: Sequence[OElem]):
        if len(coeffs) != p:
            raise ValueError("need exactly p coefficients")
        self.p = p
        self.coeffs = list(coeffs)

    @classmethod
    def zero(cls, p: int) -> "UPlusElem":
        return cls(p, [OElem.zero(p) for _ in range(p)])

    def __add__(self, other: "UPlusElem") -> "UPlusElem":
        return UPlusElem(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c: OElem) -> "UPlusElem":
        return UPlusElem(self.p, [c * a for a in self.coeffs])

    def __mul__(self, other: "UPlusElem") -> "UPlusElem":
        return u_mul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, UPlusElem) and self.coeffs == other.coeffs

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]

    @classmethod
    def from_json(cls, obj: Sequence) -> "UPlusElem":
        coeffs = [OElem.from_json(c) for c in obj]
        if not coeffs:
            raise ValueError("empty element")
        return cls(coeffs[0].p, coeffs)

    def __repr__(self) -> str:
        parts = [f"({c.pretty()})E^({n})" for n, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(parts) or "0"


class UPlusTensorElem:
    """sum c_{s,t} E^(s) (x) E^(t)."""

    def __init__(self, p: int, coeffs: Mapping[tuple, OElem] | None = None):
        self.p = p
        self.coeffs: Dict[tuple, OElem] = {}
        for k, c in (coeffs or {}).items():
            if not c.is_zero():
                self.coeffs[k] = c

    def get(self, s: int, t: int) -> OElem:
        return self.coeffs.get((s, t), OElem.zero(self.p))

    def __add__(self, other: "UPlusTensorElem") -> "UPlusTensorElem":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return UPlusTensorElem(self.p, out)

    def __mul__(self, other: "UPlusTensorElem") -> "UPlusTensorElem":
        return twisted_tensor_mul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, UPlusTensorElem) and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        parts = [f"({c.pretty()})E^({s})xE^({t})" for (s, t), c in sorted(self.coeffs.items())]
        return " + ".join(parts) or "0"


def divided_power(p: int, n: int) -> UPlusElem:
    if not 0 <= n < p:
        raise ValueError("divided powers run over 0 <= n <= p-1")
    out = UPlusElem.zero(p)
    out.coeffs[n] = OElem.one(p)
    return out


def u_mul(x: UPlusElem, y: UPlusElem) -> UPlusElem:
    """E^(n) E^(m) = [n+m brack n] E^(n+m), and 0 once n + m >= p."""
    if x.p != y.p:
        raise ValueError("prime mismatch")
    p = x.p
    out = [OElem.zero(p) for _ in range(p)]
    for n, a in enumerate(x.coeffs):
        if a.is_zero():
            continue
        for m, b in enumerate(y.coeffs):
            if b.is_zero() or n + m >= p:
                continue
            out[n + m] = out[n + m] + a * b * _binom(p, n + m, n)
    return UPlusElem(p, out)


def u_comul(x: UPlusElem) -> UPlusTensorElem:
    """Delta(E^(n)) = sum_t q^{-t(n-t)} E^(t) (x) E^(n-t)."""
    p = x.p
    out: Dict[tuple, OElem] = {}
    for n, c in enumerate(x.coeffs):
        if c.is_zero():
            continue
        for t in range(n + 1):
            k = (t, n - t)
            v = c * q_power(p, -t * (n - t))
            out[k] = out[k] + v if k in out else v
    return UPlusTensorElem(p, out)


def u_counit(x: UPlusElem) -> OElem:
    return x.coeffs[0]


TWIST = -2  # q-exponent per unit of |x2||y1|; the only value compatible with Delta below


def twisted_tensor_mul(
    x: UPlusTensorElem, y: UPlusTensorElem, twist: int = TWIST
) -> UPlusTensorElem:
    """(x1 (x) x2)(y1 (x) y2) = q^{twist |x2||y1|} x1 y1 (x) x2 y2, with |E^(n)| = n.

    With Delta(E^(n)) = sum_t q^{-t(n-t)} E^(t) (x) E^(n-t), comparing
    Delta(E)^2 with [2] Delta(E^(2)) gives 1 + q^twist = 1 + q^{-2}, which
    fixes twist = -2 (the symmetric form of sl2 pairs E with itself to 2).
    """
    p = x.p
    out: Dict[tuple, OElem] = {}
    for (s1, t1), a in x.coeffs.items():
        for (s2, t2), b in y.coeffs.items():
            if s1 + s2 >= p or t1 + t2 >= p:
                continue
            c = a * b * q_power(p, twist * t1 * s2) * _binom(p, s1 + s2, s1) * _binom(p, t1 + t2, t1)
            k = (s1 + s2, t1 + t2)
            out[k] = out[k] + c if k in out else c
    return UPlusTensorElem(p, out)


def _comul_tensor(z: UPlusTensorElem, left: bool) -> Dict[tuple, OElem]:
    """(Delta (x) 1) z or (1 (x) Delta) z as a map on triples."""
    p = z.p
    out: Dict[tuple, OElem] = {}
    for (s, t), c in z.coeffs.items():
        n = s if left else t
        for u in range(n + 1):
            k = (u, n - u, t) if left else (s, u, n - u)
            v = c * q_power(p, -u * (n - u))
            out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


@dataclass
class BialgebraReport:
    p: int
    associative: bool
    multiplicative: bool
    coassociative: bool
    counit: bool
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.associative and self.multiplicative and self.coassociative and self.counit

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "associative": self.associative,
            "multiplicative": self.multiplicative,
            "coassociative": self.coassociative,
            "counit": self.counit,
            "ok": self.ok,
            "failures": self.failures,
        }


def verify_bialgebra(p: int) -> BialgebraReport:
    """Exhaustive checks over the divided power basis."""
    check_prime(p)
    E = [divided_power(p, n) for n in range(p)]
    fails: List[str] = []
    assoc = True
    for a in range(p):
        for b in range(p):
            for c in range(p):
                if (E[a] * E[b]) * E[c] != E[a] * (E[b] * E[c]):
                    assoc = False
                    fails.append(f"associativity at ({a},{b},{c})")
    mult = True
    for a in range(p):
        for b in range(p):
            if u_comul(E[a] * E[b]) != u_comul(E[a]) * u_comul(E[b]):
                mult = False
                fails.append(f"Delta(xy) at ({a},{b})")
    coassoc = True
    for n in range(p):
        d = u_comul(E[n])
        if _comul_tensor(d, True) != _comul_tensor(d, False):
            coassoc = False
            fails.append(f"coassociativity at {n}")
    counit = True
    for n in range(p):
        d = u_comul(E[n])
        left = UPlusElem(p, [d.get(0, t) if t == n else OElem.zero(p) for t in range(p)])
        right = UPlusElem(p, [d.get(s, 0) if s == n else OElem.zero(p) for s in range(p)])
        # (eps (x) 1) Delta picks s = 0, (1 (x) eps) Delta picks t = 0
        if left != E[n] or right != E[n] or (n > 0 and not u_counit(E[n]).is_zero()):
            counit = False
            fails.append(f"counit at {n}")
    return BialgebraReport(p, assoc, mult, coassoc, counit, fails)


def binomial_table(p: int, target: str | None = None) -> Dict[tuple, object]:
    """Structure constants [n+m brack n], optionally projected to O_p, O_2p or F_p."""
    out = {}
    for n in range(p):
        for m in range(p - n):
            c = _binom(p, n + m, n)
            out[(n, m)] = project(c, target) if target else c
    return out


def categorification_crosscheck(p: int, n: int, m: int) -> dict:
    """Compare the nilHecke symbols with the structure constants of u+."""
    from .nilhecke import nh_induction_symbol, nh_twisted_restriction_symbol

    if n < 0 or m < 0 or n + m > p - 1:
        raise ValueError("need n + m <= p - 1")
    res, res_ok = nh_twisted_restriction_symbol(n, m, p)
    ind, ind_ok = nh_induction_symbol(n, m, p)
    delta = u_comul(divided_power(p, n + m)).get(n, m)
    prod = (divided_power(p, n) * divided_power(p, m)).coeffs[n + m]
    restriction_ok = res == delta
    induction_ok = ind == prod
    return {
        "p": p,
        "n": n,
        "m": m,
        "restriction": res.pretty(),
        "comultiplication": delta.pretty(),
        "induction": ind.pretty(),
        "multiplication": prod.pretty(),
        "verified": res_ok and ind_ok,
        "ok": restriction_ok and induction_ok and res_ok and ind_ok,
    }
