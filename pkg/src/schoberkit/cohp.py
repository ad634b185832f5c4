"""Cohomology of line bundles on P^m with monomial bases.

H^0(P^m, O(d)) has the monomials of degree d with nonnegative exponents as a
basis; H^m(P^m, O(d)) has the Laurent monomials of degree d with all exponents
at most -1. Everything in between vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from fractions import Fraction

from .exactalg import RatMatrix

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class LaurentMonomial:
    exponents: Monomial

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __mul__(self, other: "LaurentMonomial") -> "LaurentMonomial":
        return LaurentMonomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __str__(self) -> str:
        parts = []
        for k, e in enumerate(self.exponents):
            if e == 1:
                parts.append(f"x{k}")
            elif e:
                parts.append(f"x{k}^{e}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class LineBundleCohBasis:
    m: int
    d: int
    i: int
    basis: tuple[LaurentMonomial, ...]

    def index(self, mono: LaurentMonomial) -> int | None:
        try:
            return self.basis.index(mono)
        except ValueError:
            return None


def compositions(total: int, parts: int) -> list[Monomial]:
    """Nonnegative integer vectors of the given length and sum, in lexicographic order."""
    if parts == 0:
        return [()] if total == 0 else []
    if total < 0:
        return []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def h_dim(m: int, i: int, d: int) -> int:
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return 1 if i == 0 else 0
    if i == 0:
        return comb(d + m, m) if d >= 0 else 0
    if i == m:
        return comb(-d - 1, m) if d <= -m - 1 else 0
    return 0


def h_basis(m: int, i: int, d: int) -> LineBundleCohBasis:
    if m < 0:
        raise ValueError("m must be nonnegative")
    n = m + 1
    if m == 0:
        monos = [(d,)] if i == 0 else []
    elif i == 0:
        monos = compositions(d, n) if d >= 0 else []
    elif i == m:
        # exponents e_k = -1 - f_k with f_k >= 0 and sum f = -d - n
        monos = [tuple(-1 - f for f in fs) for fs in reversed(compositions(-d - n, n))] if d <= -n else []
    else:
        monos = []
    return LineBundleCohBasis(m, d, i, tuple(LaurentMonomial(e) for e in monos))


def cup_product(a: LaurentMonomial, b: LaurentMonomial, m: int, i: int) -> LaurentMonomial | None:
    """Product of a section monomial with a class in H^i; None means the zero class."""
    if any(e < 0 for e in a.exponents):
        raise ValueError("first factor must be a global section monomial")
    prod = a * b
    if m == 0:
        return prod
    if i == m and any(e >= 0 for e in prod.exponents):
        return None
    if i == 0 and any(e < 0 for e in prod.exponents):
        return None
    return prod


def serre_pair(m: int, d: int) -> RatMatrix:
    """Pairing matrix H^0(O(d)) x H^m(O(-d-m-1)) -> H^m(O(-m-1)).

    Entry (u, v) is the coefficient of the generator x_0^-1 ... x_m^-1 in the
    cup product of the u-th section with the v-th top class.
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    left = h_basis(m, 0, d).basis
    right = h_basis(m, m, -d - m - 1).basis
    gen = (-1,) * (m + 1)
    rows = []
    for u in left:
        row = []
        for v in right:
            p = cup_product(u, v, m, m)
            row.append(Fraction(1) if p is not None and p.exponents == gen else Fraction(0))
        rows.append(row)
    return RatMatrix.from_rows(rows, len(right))


def euler_char(m: int, d: int) -> int:
    """chi(O(d)) as the Hilbert polynomial binom(d+m, m) evaluated at d."""
    num = 1
    for k in range(1, m + 1):
        num *= d + k
    den = 1
    for k in range(1, m + 1):
        den *= k
    return num // den


def table(m: int, dmin: int, dmax: int) -> dict[int, dict[int, int]]:
    return {d: {i: h_dim(m, i, d) for i in range(m + 1)} for d in range(dmin, dmax + 1)}


def table_markdown(m: int, dmin: int, dmax: int) -> str:
    t = table(m, dmin, dmax)
    head = "| d | " + " | ".join(f"h^{i}" for i in range(m + 1)) + " |"
    sep = "|---" * (m + 2) + "|"
    lines = [head, sep]
    for d, row in t.items():
        lines.append(f"| {d} | " + " | ".join(str(row[i]) for i in range(m + 1)) + " |")
    return "\n".join(lines)
