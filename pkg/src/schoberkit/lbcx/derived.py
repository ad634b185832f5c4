"""Derived-category tests built on hypercohomology.

An object of D(P^m) vanishes iff RGamma of its twists by O, O(1), ..., O(m)
all vanish, since those line bundles generate. RHom(F, G) is computed as
RGamma(F^v (x) G).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from ..cohp import compositions
from ..exactalg import RatMatrix, RationalChainComplex, solve
from .cech import rgamma
from .complexes import LBComplex, LBMap, cone_lb, sheaf_dual, tensor
from .poly import HomogPoly


def is_zero_object(c: LBComplex, e_cap: int | None = None) -> bool:
    if c.is_trivially_zero():
        return True
    return all(not rgamma(c, j, e_cap).dims for j in range(c.m + 1))


def is_equivalence(f: LBMap, e_cap: int | None = None) -> bool:
    return is_zero_object(cone_lb(f), e_cap)


def rhom_complex(f: LBComplex, g: LBComplex, e_cap: int | None = None) -> RationalChainComplex:
    if f.m != g.m:
        raise ValueError("objects live on different projective spaces")
    return rgamma(tensor(sheaf_dual(f), g), 0, e_cap).complex


def rhom_dims(f: LBComplex, g: LBComplex, e_cap: int | None = None) -> dict[int, int]:
    if f.m != g.m:
        raise ValueError("objects live on different projective spaces")
    return rgamma(tensor(sheaf_dual(f), g), 0, e_cap).dims


def koszul_complex(m: int, forms: list[HomogPoly] | None = None) -> LBComplex:
    """Koszul complex of m+1 linear forms (default: the coordinates), ending in O in degree 0.

    Degree -k holds O(-k) once for each k-subset I, and
    d(e_I) = sum_{v in I} (-1)^{position of v in I} l_v e_{I - v}.
    """
    n = m + 1
    if forms is None:
        forms = [HomogPoly.var(n, v) for v in range(n)]
    subsets = {k: list(combinations(range(n), k)) for k in range(n + 1)}
    terms = {-k: (-k,) * len(subsets[k]) for k in range(n + 1)}
    diffs = {}
    for k in range(1, n + 1):
        src = subsets[k]
        tgt = {s: i for i, s in enumerate(subsets[k - 1])}
        rows = [[HomogPoly(n)] * len(src) for _ in range(len(tgt))]
        for col, idx in enumerate(src):
            for pos, v in enumerate(idx):
                rest = idx[:pos] + idx[pos + 1:]
                term = forms[v] if pos % 2 == 0 else -forms[v]
                rows[tgt[rest]][col] = rows[tgt[rest]][col] + term
        diffs[-k] = tuple(tuple(r) for r in rows)
    return LBComplex(m, -n, 0, terms, diffs)


def find_homotopy(f: LBMap, g: LBMap) -> dict[int, tuple[tuple[HomogPoly, ...], ...]] | None:
    """Polynomial chain homotopy h with f - g = d h + h d, or None if none exists.

    h^i maps S^i to T^{i-1}; entries are homogeneous of the degree forced by
    the twists. Solved as one exact linear system in the coefficients.
    """
    s, t = f.source, f.target
    if g.source != s or g.target != t:
        raise ValueError("maps must share source and target")
    nv = s.nvars
    variables: dict[tuple[int, int, int, tuple[int, ...]], int] = {}
    lo = min(s.lo, t.lo)
    hi = max(s.hi, t.hi) + 1
    for i in range(lo, hi + 1):
        for r, b in enumerate(t.term(i - 1)):
            for c, a in enumerate(s.term(i)):
                if b - a >= 0:
                    for e in compositions(b - a, nv):
                        variables[(i, r, c, e)] = len(variables)
    equations: dict[tuple[int, int, int, tuple[int, ...]], dict[int, Fraction]] = {}
    rhs: dict[tuple[int, int, int, tuple[int, ...]], Fraction] = {}

    def add(eq, var, coef):
        row = equations.setdefault(eq, {})
        row[var] = row.get(var, 0) + coef

    for i in range(lo, hi):
        diff = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(f.f(i), g.f(i))]
        for r in range(t.rank(i)):
            for c in range(s.rank(i)):
                for e, v in diff[r][c].terms.items():
                    rhs[(i, r, c, e)] = v
                    equations.setdefault((i, r, c, e), {})
        dt = t.d(i - 1)
        ds = s.d(i)
        for (i2, r2, c2, e2), var in variables.items():
            if i2 == i:
                # d_T^{i-1} h^i : contributes to entry (r, c2) for each row r of d_T
                for r in range(t.rank(i)):
                    for e, a in dt[r][r2].terms.items():
                        add((i, r, c2, tuple(x + y for x, y in zip(e, e2))), var, a)
            if i2 == i + 1:
                # h^{i+1} d_S^i : contributes to entry (r2, c) for each column c of d_S
                for c in range(s.rank(i)):
                    for e, a in ds[c2][c].terms.items():
                        add((i, r2, c, tuple(x + y for x, y in zip(e, e2))), var, a)
    eq_keys = sorted(set(equations) | set(rhs))
    nvar = len(variables)
    if not eq_keys:
        return {}
    if nvar == 0:
        return {} if not any(rhs.values()) else None
    a = RatMatrix(len(eq_keys), nvar, tuple(
        tuple(equations.get(k, {}).get(v, Fraction(0)) for v in range(nvar)) for k in eq_keys))
    b = [rhs.get(k, Fraction(0)) for k in eq_keys]
    x = solve(a, b)
    if x is None:
        return None
    out: dict[int, list[list[dict]]] = {}
    for (i, r, c, e), var in variables.items():
        mat = out.setdefault(i, [[{} for _ in range(s.rank(i))] for _ in range(t.rank(i - 1))])
        if x[var]:
            mat[r][c][e] = x[var]
    return {i: tuple(tuple(HomogPoly(nv, cell) for cell in row) for row in mat) for i, mat in out.items()}
