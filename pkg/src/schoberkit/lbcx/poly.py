"""Homogeneous polynomials with exact rational coefficients, and matrices of them."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..exactalg.matrix import frac_str, to_fraction

Exp = tuple[int, ...]


class HomogPoly:
    """A homogeneous polynomial in `nvars` variables; degree None means zero.

    Instances are treated as immutable.
    """

    __slots__ = ("nvars", "degree", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exp, Fraction] | None = None):
        clean: dict[Exp, Fraction] = {}
        deg = None
        for e, c in (terms or {}).items():
            c = to_fraction(c)
            if not c:
                continue
            e = tuple(e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent {e}")
            d = sum(e)
            if deg is None:
                deg = d
            elif d != deg:
                raise ValueError("polynomial is not homogeneous")
            clean[e] = c
        self.nvars = nvars
        self.degree = deg
        self.terms = clean
        self._hash = None

    # constructors

    @classmethod
    def zero(cls, nvars: int) -> "HomogPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c=1) -> "HomogPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, k: int, c=1) -> "HomogPoly":
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): c})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "HomogPoly":
        n = len(coeffs)
        return cls(n, {tuple(1 if j == k else 0 for j in range(n)): c for k, c in enumerate(coeffs)})

    @classmethod
    def monomial(cls, exps: Exp, c=1) -> "HomogPoly":
        return cls(len(exps), {tuple(exps): c})

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomogPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"HomogPoly({self.nvars}, {str(self)})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{k}" + (f"^{p}" if p > 1 else "") for k, p in enumerate(e) if p)
            if not mono:
                parts.append(frac_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{frac_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return HomogPoly(self.nvars, out)

    def __neg__(self) -> "HomogPoly":
        return HomogPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        return self + (-other)

    def scale(self, c) -> "HomogPoly":
        c = to_fraction(c)
        if c == 1:
            return self
        return HomogPoly(self.nvars, {e: c * a for e, a in self.terms.items()})

    def __mul__(self, other: "HomogPoly") -> "HomogPoly":
        if not self.terms or not other.terms:
            return HomogPoly(self.nvars)
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return HomogPoly(self.nvars, out)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= to_fraction(x) ** k
            total += v
        return total

    def coefficient(self, e: Exp) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    # changes of variables

    def substitute(self, var: int, form: "HomogPoly") -> "HomogPoly":
        """Replace x_var by a linear form in the other variables and drop x_var."""
        if form.degree not in (None, 1) or form.nvars != self.nvars - 1:
            raise ValueError("substitution must be a linear form in the remaining variables")
        n1 = self.nvars - 1
        powers = [HomogPoly.const(n1)]
        out = HomogPoly(n1)
        for e, c in self.terms.items():
            k = e[var]
            while len(powers) <= k:
                powers.append(powers[-1] * form)
            rest = e[:var] + e[var + 1:]
            out = out + HomogPoly(n1, {rest: c}) * powers[k]
        return out

    def insert_variable(self, var: int) -> "HomogPoly":
        """View as a polynomial in one more variable, inserted at position var."""
        return HomogPoly(self.nvars + 1, {e[:var] + (0,) + e[var:]: c for e, c in self.terms.items()})

    def divide_linear(self, lin: "HomogPoly", var: int) -> "HomogPoly":
        """Exact quotient by a linear form whose x_var coefficient is nonzero."""
        if lin.degree != 1:
            raise ValueError("divisor must be linear")
        unit = [0] * self.nvars
        unit[var] = 1
        lead = lin.coefficient(tuple(unit))
        if not lead:
            raise ValueError("linear form does not involve the pivot variable")
        rem = dict(self.terms)
        quot: dict[Exp, Fraction] = {}
        while rem:
            e = max(rem, key=lambda x: (x[var], x))
            if e[var] == 0:
                raise ArithmeticError("polynomial is not divisible by the linear form")
            q = list(e)
            q[var] -= 1
            q = tuple(q)
            c = rem[e] / lead
            quot[q] = quot.get(q, 0) + c
            for le, lc in lin.terms.items():
                t = tuple(a + b for a, b in zip(q, le))
                v = rem.get(t, 0) - c * lc
                if v:
                    rem[t] = v
                else:
                    rem.pop(t, None)
        return HomogPoly(self.nvars, quot)

    # serialization

    def to_json(self) -> dict:
        return {
            "deg": self.degree,
            "coeffs": {",".join(map(str, e)): frac_str(c) for e, c in sorted(self.terms.items())},
        }

    @classmethod
    def from_json(cls, data: dict, nvars: int) -> "HomogPoly":
        terms = {}
        for key, val in data.get("coeffs", {}).items():
            e = tuple(int(x) for x in key.split(",")) if key else ()
            terms[e] = Fraction(val)
        p = cls(nvars, terms)
        declared = data.get("deg")
        if p.degree is not None and declared is not None and declared != p.degree:
            raise ValueError(f"declared degree {declared} but monomials have degree {p.degree}")
        return p


PolyMatrix = tuple[tuple[HomogPoly, ...], ...]


def pm_zero(rows: int, cols: int, nvars: int) -> PolyMatrix:
    z = HomogPoly(nvars)
    return tuple((z,) * cols for _ in range(rows))


def pm_identity(n: int, nvars: int) -> PolyMatrix:
    one = HomogPoly.const(nvars)
    z = HomogPoly(nvars)
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def pm_scalar(n: int, nvars: int, c) -> PolyMatrix:
    one = HomogPoly.const(nvars, c)
    z = HomogPoly(nvars)
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def pm_from(rows: Iterable[Iterable[HomogPoly]]) -> PolyMatrix:
    return tuple(tuple(r) for r in rows)


def pm_shape(a: PolyMatrix, cols_hint: int = 0) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else cols_hint)


def pm_mul(a: PolyMatrix, b: PolyMatrix, nvars: int, inner: int | None = None, cols: int | None = None) -> PolyMatrix:
    if inner is None:
        inner = len(b)
    if cols is None:
        cols = len(b[0]) if b else 0
    z = HomogPoly(nvars)
    out = []
    for row in a:
        if len(row) != inner:
            raise ValueError("polynomial matrix shapes do not match")
        acc = [z] * cols
        for k, x in enumerate(row):
            if x.terms:
                brow = b[k]
                for j in range(cols):
                    y = brow[j]
                    if y.terms:
                        acc[j] = acc[j] + x * y
        out.append(tuple(acc))
    return tuple(out)


def pm_add(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def pm_neg(a: PolyMatrix) -> PolyMatrix:
    return tuple(tuple(-x for x in r) for r in a)


def pm_scale(a: PolyMatrix, c) -> PolyMatrix:
    return tuple(tuple(x.scale(c) for x in r) for r in a)


def pm_is_zero(a: PolyMatrix) -> bool:
    return not any(x.terms for r in a for x in r)


def pm_transpose(a: PolyMatrix, rows: int, cols: int) -> PolyMatrix:
    return tuple(tuple(a[i][j] for i in range(rows)) for j in range(cols))


def pm_block(blocks: Sequence[Sequence[PolyMatrix | None]], row_sizes: Sequence[int],
             col_sizes: Sequence[int], nvars: int) -> PolyMatrix:
    z = HomogPoly(nvars)
    out = []
    for bi, rs in enumerate(row_sizes):
        for i in range(rs):
            row = []
            for bj, cs in enumerate(col_sizes):
                blk = blocks[bi][bj]
                if blk is None:
                    row.extend([z] * cs)
                else:
                    if len(blk) != rs or (rs and len(blk[i]) != cs):
                        raise ValueError(f"block ({bi},{bj}) has the wrong shape")
                    row.extend(blk[i])
            out.append(tuple(row))
    return tuple(out)


def pm_map(a: PolyMatrix, fn) -> PolyMatrix:
    return tuple(tuple(fn(x) for x in r) for r in a)


def pm_to_json(a: PolyMatrix) -> list[list[dict]]:
    return [[x.to_json() for x in r] for r in a]


def pm_from_json(data: list[list[dict]], nvars: int) -> PolyMatrix:
    return tuple(tuple(HomogPoly.from_json(x, nvars) for x in r) for r in data)
