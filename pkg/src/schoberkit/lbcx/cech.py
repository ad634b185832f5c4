"""Hypercohomology of line-bundle complexes through a truncated Cech model.

For a floor E >= 1, the Cech module of O(d) on the chart intersection
indexed by a nonempty set I of coordinates is spanned by Laurent monomials of
degree d whose exponents are >= 0 outside I and >= -E inside I. Polynomial
multiplication and chart inclusions never lower exponents, so these spans
form a subcomplex of the full Cech total complex.

The truncated total complex splits by monomial, and each monomial piece is a
Koszul-type complex on the chart sets containing its negative support. A
contraction on those pieces retracts every term onto its monomial cohomology
(degree 0 and degree m classes). The homological perturbation lemma then
transfers the polynomial differential exactly onto that small model.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from ..cohp import compositions, euler_char
from ..exactalg import ComplexMap, RatMatrix, RationalChainComplex, cohomology_dims
from .complexes import LBComplex, LBMap

DEFAULT_E_CAP = 64
_E_CAP: contextvars.ContextVar[int] = contextvars.ContextVar("e_cap", default=DEFAULT_E_CAP)


@contextlib.contextmanager
def e_cap_context(cap: int) -> Iterator[None]:
    """Temporarily change the Cech floor cap used by rgamma."""
    if cap < 1:
        raise ValueError("the floor cap must be positive")
    token = _E_CAP.set(cap)
    try:
        yield
    finally:
        _E_CAP.reset(token)


def current_e_cap() -> int:
    return _E_CAP.get()


class RGammaDiagnostic(RuntimeError):
    """Raised when the truncated Cech computation does not certify."""


@dataclass(frozen=True)
class RGammaResult:
    dims: dict[int, int]
    complex: RationalChainComplex
    floor: int
    euler: int

    def total(self) -> int:
        return sum(self.dims.values())


Key = tuple[int, int, int, tuple[int, ...]]  # (term degree, summand, chart mask, exponents)


def _popcount_below(mask: int, v: int) -> int:
    return bin(mask & ((1 << v) - 1)).count("1")


class _SmallModel:
    """Contraction data for the truncated Cech total complex of c(j)."""

    def __init__(self, c: LBComplex, j: int, floor: int):
        self.c = c
        self.j = j
        self.floor = floor
        self.m = c.m
        self.n = c.m + 1
        self.full = (1 << self.n) - 1
        self._neg: dict[tuple[int, ...], int] = {}
        # small model basis, grouped by total degree
        self.basis: dict[int, list[tuple[int, int, tuple[int, ...]]]] = {}
        self.index: dict[tuple[int, int, tuple[int, ...]], tuple[int, int]] = {}
        for p in range(c.lo, c.hi + 1):
            for s, d0 in enumerate(c.term(p)):
                d = d0 + j
                for alpha, q in self._classes(d):
                    k = p + q
                    lst = self.basis.setdefault(k, [])
                    self.index[(p, s, alpha)] = (k, len(lst))
                    lst.append((p, s, alpha))

    def _classes(self, d: int) -> list[tuple[tuple[int, ...], int]]:
        n, E = self.n, self.floor
        out = []
        if d >= 0:
            out.extend((a, 0) for a in compositions(d, n))
        if self.m == 0:
            if -E <= d < 0:
                out.append(((d,), 0))
            return out
        # all exponents in [-E, -1]
        top = -d - n
        if top >= 0:
            for f in compositions(top, n):
                if max(f) <= E - 1:
                    out.append((tuple(-1 - x for x in f), self.m))
        return out

    def neg_mask(self, alpha: tuple[int, ...]) -> int:
        v = self._neg.get(alpha)
        if v is None:
            v = 0
            for k, e in enumerate(alpha):
                if e < 0:
                    v |= 1 << k
            self._neg[alpha] = v
        return v

    # the three pieces of contraction data

    def incl(self, p: int, s: int, alpha: tuple[int, ...]) -> dict[Key, Fraction]:
        neg = self.neg_mask(alpha)
        if neg == 0:
            return {(p, s, 1 << v, alpha): Fraction(1) for v in range(self.n)}
        return {(p, s, self.full, alpha): Fraction(1)}

    def proj(self, x: dict[Key, Fraction]) -> dict[tuple[int, int], Fraction]:
        out: dict[tuple[int, int], Fraction] = {}
        for (p, s, mask, alpha), c in x.items():
            neg = self.neg_mask(alpha)
            if (neg == 0 and mask == 1) or (neg == self.full and mask == self.full):
                pos = self.index[(p, s, alpha)]
                out[pos] = out.get(pos, 0) + c
        return out

    def homotopy(self, x: dict[Key, Fraction]) -> dict[Key, Fraction]:
        """Total-complex homotopy (-1)^p h, with h removing the first non-negative chart."""
        out: dict[Key, Fraction] = {}
        for (p, s, mask, alpha), c in x.items():
            neg = self.neg_mask(alpha)
            if neg == self.full:
                continue
            free = ~neg & self.full
            v0 = (free & -free).bit_length() - 1
            bit = 1 << v0
            if not mask & bit or mask == bit:
                continue
            sign = -1 if (_popcount_below(mask, v0) + p) % 2 else 1
            key = (p, s, mask ^ bit, alpha)
            out[key] = out.get(key, 0) + (c if sign == 1 else -c)
        return {k: v for k, v in out.items() if v}

    def poly_apply(self, x: dict[Key, Fraction], mats, target_rank) -> dict[Key, Fraction]:
        """Apply a matrix of polynomials per term degree (differential or chain map)."""
        out: dict[Key, Fraction] = {}
        for (p, s, mask, alpha), c in x.items():
            mat, p2 = mats(p)
            if mat is None:
                continue
            for r in range(target_rank(p2)):
                poly = mat[r][s]
                if not poly.terms:
                    continue
                for gamma, a in poly.terms.items():
                    beta = tuple(u + w for u, w in zip(alpha, gamma))
                    key = (p2, r, mask, beta)
                    out[key] = out.get(key, 0) + c * a
        return {k: v for k, v in out.items() if v}

    def t(self, x: dict[Key, Fraction]) -> dict[Key, Fraction]:
        c = self.c

        def mats(p):
            if c.lo <= p < c.hi:
                return c.diffs[p], p + 1
            return None, p + 1

        return self.poly_apply(x, mats, c.rank)

    def perturbed_incl(self, p: int, s: int, alpha: tuple[int, ...]) -> dict[Key, Fraction]:
        """i_inf = sum_k (-H t)^k i."""
        x = self.incl(p, s, alpha)
        total = dict(x)
        while x:
            x = _neg(self.homotopy(self.t(x)))
            _acc(total, x)
        return {k: v for k, v in total.items() if v}

    def perturbed_proj(self, y: dict[Key, Fraction]) -> dict[tuple[int, int], Fraction]:
        """p_inf = p sum_k (-t H)^k."""
        out = self.proj(y)
        x = y
        while x:
            x = _neg(self.t(self.homotopy(x)))
            _acc(out, self.proj(x))
        return out

    def small_complex(self) -> RationalChainComplex:
        dims = {k: len(v) for k, v in self.basis.items()}
        if not dims:
            return RationalChainComplex.zero()
        cols: dict[int, list[dict[int, Fraction]]] = {}
        for k, elems in self.basis.items():
            colk = []
            for (p, s, alpha) in elems:
                x = self.t(self.incl(p, s, alpha))
                img = self.proj(x)
                while x:
                    x = _neg(self.t(self.homotopy(x)))
                    if x:
                        _acc(img, self.proj(x))
                col: dict[int, Fraction] = {}
                for (k2, idx), v in img.items():
                    if v:
                        if k2 != k + 1:
                            raise AssertionError("transferred differential has the wrong degree")
                        col[idx] = v
                colk.append(col)
            cols[k] = colk
        diffs = {}
        for k, colk in cols.items():
            rows = dims.get(k + 1, 0)
            if not rows or not colk:
                continue
            data = [[Fraction(0)] * len(colk) for _ in range(rows)]
            for ci, col in enumerate(colk):
                for ri, v in col.items():
                    data[ri][ci] = v
            diffs[k] = RatMatrix(rows, len(colk), tuple(tuple(r) for r in data))
        return RationalChainComplex.build(dims, diffs)


def _neg(x: dict[Key, Fraction]) -> dict[Key, Fraction]:
    return {k: -v for k, v in x.items()}


def _acc(total: dict, x: dict) -> None:
    for k, v in x.items():
        total[k] = total.get(k, 0) + v


def sufficient_floor(c: LBComplex, j: int = 0) -> int:
    """A floor at which every top-degree class of every term is already present.

    The top cohomology of O(d) needs exponents down to d + m, so any
    E >= -(min twist) - m captures it; below that the truncation loses classes.
    """
    twists = [d + j for t in c.terms.values() for d in t]
    if not twists:
        return 1
    return max(1, -min(twists) - c.m)


def initial_floor(c: LBComplex, j: int = 0) -> int:
    twists = [d + j for t in c.terms.values() for d in t]
    if not twists:
        return 1
    return max(1, max(abs(d) for d in twists) + (c.hi - c.lo))


def expected_euler(c: LBComplex, j: int = 0) -> int:
    return sum((-1) ** (p % 2) * euler_char(c.m, d + j) for p, t in c.terms.items() for d in t)


def rgamma_at_floor(c: LBComplex, j: int, floor: int) -> RGammaResult:
    model = _SmallModel(c, j, floor)
    small = model.small_complex()
    dims = cohomology_dims(small)
    chi = sum((-1) ** (k % 2) * v for k, v in dims.items())
    return RGammaResult(dims, small, floor, chi)


def rgamma(c: LBComplex, j: int = 0, e_cap: int | None = None) -> RGammaResult:
    """Hypercohomology of c(j) with stabilization and Euler certificate.

    The floor starts at max(1, max|twist| + length) and doubles until two
    consecutive floors give the same dimensions, the Euler characteristic
    matches the binomial count, and the floor covers all top-degree classes.
    """
    cap = e_cap if e_cap is not None else current_e_cap()
    need = sufficient_floor(c, j)
    chi = expected_euler(c, j)
    if c.is_trivially_zero():
        return RGammaResult({}, RationalChainComplex.zero(), 1, 0)
    floors = []
    e = initial_floor(c, j)
    while e <= cap:
        floors.append(e)
        e *= 2
    if len(floors) < 2:
        floors = sorted({max(1, cap - 1), cap})
    prev = None
    history = []
    for e in floors:
        res = rgamma_at_floor(c, j, e)
        history.append((e, res.dims, res.euler))
        if prev is not None and prev.dims == res.dims and res.euler == chi and e >= need:
            return res
        prev = res
    raise RGammaDiagnostic(
        f"hypercohomology did not certify below floor cap {cap}: required floor {need}, "
        f"expected Euler characteristic {chi}, history {history}")


def dense_cech_complex(c: LBComplex, j: int, floor: int) -> RationalChainComplex:
    """The full truncated Cech total complex, assembled densely.

    Basis elements are (term degree p, summand s, chart set I, monomial) in
    total degree p + |I| - 1; the differential is t + (-1)^p delta with
    delta(e_I) = sum_{w not in I} (-1)^{#{v in I : v < w}} e_{I + w}.
    """
    n = c.m + 1
    full = (1 << n) - 1
    basis: dict[int, list[Key]] = {}
    for p in range(c.lo, c.hi + 1):
        for s, d0 in enumerate(c.term(p)):
            d = d0 + j
            for mask in range(1, full + 1):
                size = bin(mask).count("1")
                lows = [-floor if mask >> v & 1 else 0 for v in range(n)]
                for f in compositions(d - sum(lows), n):
                    alpha = tuple(a + b for a, b in zip(f, lows))
                    basis.setdefault(p + size - 1, []).append((p, s, mask, alpha))
    index = {k: {key: i for i, key in enumerate(v)} for k, v in basis.items()}
    dims = {k: len(v) for k, v in basis.items()}
    diffs = {}
    for k, keys in basis.items():
        tgt = index.get(k + 1)
        if not tgt:
            continue
        data = [[Fraction(0)] * len(keys) for _ in range(dims[k + 1])]
        for col, (p, s, mask, alpha) in enumerate(keys):
            for w in range(n):
                if mask >> w & 1:
                    continue
                sign = -1 if (_popcount_below(mask, w) + p) % 2 else 1
                data[tgt[(p, s, mask | 1 << w, alpha)]][col] += sign
            if c.lo <= p < c.hi:
                dp = c.diffs[p]
                for r in range(c.rank(p + 1)):
                    for gamma, a in dp[r][s].terms.items():
                        beta = tuple(u + v for u, v in zip(alpha, gamma))
                        data[tgt[(p + 1, r, mask, beta)]][col] += a
        diffs[k] = RatMatrix(dims[k + 1], len(keys), tuple(tuple(r) for r in data))
    return RationalChainComplex.build(dims, diffs)


def transfer_map(f: LBMap, j: int = 0, floor: int | None = None) -> ComplexMap:
    """The chain map between small models induced by an LBMap (p_inf f i_inf)."""
    s, t = f.source, f.target
    if floor is None:
        floor = max(sufficient_floor(s, j), sufficient_floor(t, j), initial_floor(s, j), initial_floor(t, j))
    ms = _SmallModel(s, j, floor)
    mt = _SmallModel(t, j, floor)
    cs, ct = ms.small_complex(), mt.small_complex()

    def mats(p):
        return f.f(p), p

    comps: dict[int, list[list[Fraction]]] = {}
    for k, elems in ms.basis.items():
        rows = ct.dim(k)
        data = [[Fraction(0)] * len(elems) for _ in range(rows)]
        for col, (p, sidx, alpha) in enumerate(elems):
            x = ms.perturbed_incl(p, sidx, alpha)
            y = mt.poly_apply(x, mats, t.rank)
            img = mt.perturbed_proj(y)
            for (k2, idx), v in img.items():
                if v:
                    if k2 != k:
                        raise AssertionError("transferred map has the wrong degree")
                    data[idx][col] = v
        comps[k] = data
    return ComplexMap(cs, ct, {k: RatMatrix(ct.dim(k), cs.dim(k), tuple(tuple(r) for r in d))
                               for k, d in comps.items() if ct.dim(k) or cs.dim(k)})
