"""Bounded complexes of sums of line bundles on P^m and maps between them.

A differential entry from a summand O(a) in degree i to a summand O(b) in
degree i+1 is a homogeneous polynomial of degree b - a (or zero). Matrices are
indexed [target summand][source summand].
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .poly import (
    HomogPoly,
    PolyMatrix,
    pm_add,
    pm_block,
    pm_from_json,
    pm_identity,
    pm_is_zero,
    pm_mul,
    pm_neg,
    pm_scale,
    pm_to_json,
    pm_transpose,
    pm_zero,
)


@dataclass(frozen=True)
class LBComplex:
    m: int
    lo: int
    hi: int
    terms: Mapping[int, tuple[int, ...]]
    diffs: Mapping[int, PolyMatrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValueError("projective dimension must be nonnegative")
        if self.hi < self.lo:
            raise ValueError("empty degree range")
        terms = {i: tuple(int(d) for d in self.terms.get(i, ())) for i in range(self.lo, self.hi + 1)}
        stray = [i for i, t in self.terms.items() if t and i not in terms]
        if stray:
            raise ValueError(f"terms outside the degree range: {stray}")
        diffs = {}
        nv = self.m + 1
        for i in range(self.lo, self.hi):
            d = self.diffs.get(i)
            rows, cols = len(terms[i + 1]), len(terms[i])
            if d is None:
                d = pm_zero(rows, cols, nv)
            d = tuple(tuple(r) for r in d)
            if len(d) != rows or any(len(r) != cols for r in d):
                raise ValueError(f"differential {i} has the wrong shape, expected {rows}x{cols}")
            if any(x.nvars != nv for r in d for x in r):
                raise ValueError(f"differential {i} has entries in the wrong number of variables")
            diffs[i] = d
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "diffs", diffs)

    @property
    def nvars(self) -> int:
        return self.m + 1

    @classmethod
    def zero(cls, m: int) -> "LBComplex":
        return cls(m, 0, 0, {0: ()})

    @classmethod
    def line(cls, m: int, d: int, degree: int = 0) -> "LBComplex":
        return cls(m, degree, degree, {degree: (d,)})

    @classmethod
    def sum_of_lines(cls, m: int, twists: Sequence[int], degree: int = 0) -> "LBComplex":
        return cls(m, degree, degree, {degree: tuple(twists)})

    @classmethod
    def two_term(cls, m: int, a: int, b: int, poly: HomogPoly, degree: int = -1) -> "LBComplex":
        """[O(a) -> O(b)] with O(a) in the given degree."""
        return cls(m, degree, degree + 1, {degree: (a,), degree + 1: (b,)}, {degree: ((poly,),)})

    def term(self, i: int) -> tuple[int, ...]:
        return self.terms.get(i, ())

    def rank(self, i: int) -> int:
        return len(self.terms.get(i, ()))

    def d(self, i: int) -> PolyMatrix:
        if self.lo <= i < self.hi:
            return self.diffs[i]
        return pm_zero(self.rank(i + 1), self.rank(i), self.nvars)

    def is_trivially_zero(self) -> bool:
        return not any(self.terms.values())

    def trimmed(self) -> "LBComplex":
        nz = [i for i, t in self.terms.items() if t]
        if not nz:
            return LBComplex.zero(self.m)
        lo, hi = min(nz), max(nz)
        if (lo, hi) == (self.lo, self.hi):
            return self
        return LBComplex(self.m, lo, hi, {i: self.terms[i] for i in range(lo, hi + 1)},
                         {i: self.diffs[i] for i in range(lo, hi)})

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "range": [self.lo, self.hi],
            "terms": {str(i): list(t) for i, t in self.terms.items()},
            "diffs": {str(i): pm_to_json(d) for i, d in self.diffs.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "LBComplex":
        m = int(data["m"])
        lo, hi = (int(x) for x in data["range"])
        terms = {int(k): tuple(int(x) for x in v) for k, v in data["terms"].items()}
        diffs = {int(k): pm_from_json(v, m + 1) for k, v in data.get("diffs", {}).items()}
        return cls(m, lo, hi, terms, diffs)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class LBMap:
    source: LBComplex
    target: LBComplex
    components: Mapping[int, PolyMatrix]

    def __post_init__(self) -> None:
        if self.source.m != self.target.m:
            raise ValueError("source and target live on different projective spaces")
        nv = self.source.nvars
        comps = {}
        for i in self.degrees():
            rows, cols = self.target.rank(i), self.source.rank(i)
            f = self.components.get(i)
            if f is None:
                f = pm_zero(rows, cols, nv)
            f = tuple(tuple(r) for r in f)
            if len(f) != rows or any(len(r) != cols for r in f):
                raise ValueError(f"component {i} has the wrong shape, expected {rows}x{cols}")
            comps[i] = f
        object.__setattr__(self, "components", comps)

    def degrees(self) -> range:
        return range(min(self.source.lo, self.target.lo), max(self.source.hi, self.target.hi) + 1)

    def f(self, i: int) -> PolyMatrix:
        comp = self.components.get(i)
        if comp is None:
            return pm_zero(self.target.rank(i), self.source.rank(i), self.source.nvars)
        return comp

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "components": {str(i): pm_to_json(f) for i, f in self.components.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "LBMap":
        s = LBComplex.from_json(data["source"])
        t = LBComplex.from_json(data["target"])
        comps = {int(k): pm_from_json(v, s.nvars) for k, v in data.get("components", {}).items()}
        return cls(s, t, comps)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: str | None = None
    location: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def _grading_violation(mat: PolyMatrix, src: Sequence[int], tgt: Sequence[int], label: str):
    for r, b in enumerate(tgt):
        for c, a in enumerate(src):
            x = mat[r][c]
            if x.terms and x.degree != b - a:
                return ValidationReport(
                    False,
                    f"grading: {label} entry ({r},{c}) from O({a}) to O({b}) has degree {x.degree}, expected {b - a}",
                    (label, r, c))
    return None


def validate(c: LBComplex) -> ValidationReport:
    """Check grading compatibility of every entry and d o d = 0; report the first failure."""
    try:
        for i in range(c.lo, c.hi):
            bad = _grading_violation(c.diffs[i], c.terms[i], c.terms[i + 1], f"d{i}")
            if bad is not None:
                return bad
        for i in range(c.lo, c.hi - 1):
            sq = pm_mul(c.diffs[i + 1], c.diffs[i], c.nvars, c.rank(i + 1), c.rank(i))
            for r, row in enumerate(sq):
                for k, x in enumerate(row):
                    if x.terms:
                        return ValidationReport(False, f"d{i + 1} o d{i} != 0 at entry ({r},{k}): {x}", (f"dd{i}", r, k))
    except Exception as exc:  # malformed entries are reported, never raised
        return ValidationReport(False, f"malformed complex: {exc}")
    return ValidationReport(True)


def validate_map(f: LBMap) -> ValidationReport:
    s, t = f.source, f.target
    try:
        for i in f.degrees():
            bad = _grading_violation(f.f(i), s.term(i), t.term(i), f"f{i}")
            if bad is not None:
                return bad
        nv = s.nvars
        for i in range(min(s.lo, t.lo) - 1, max(s.hi, t.hi) + 1):
            lhs = pm_mul(t.d(i), f.f(i), nv, t.rank(i), s.rank(i))
            rhs = pm_mul(f.f(i + 1), s.d(i), nv, s.rank(i + 1), s.rank(i))
            for r, (x, y) in enumerate(zip(lhs, rhs)):
                for k, (u, v) in enumerate(zip(x, y)):
                    if u != v:
                        return ValidationReport(False, f"chain map square at degree {i} fails at ({r},{k})", (f"sq{i}", r, k))
    except Exception as exc:
        return ValidationReport(False, f"malformed map: {exc}")
    return ValidationReport(True)


def ensure_valid(c: LBComplex) -> LBComplex:
    rep = validate(c)
    if not rep.ok:
        raise ValueError(rep.violation)
    return c


def ensure_valid_map(f: LBMap) -> LBMap:
    rep = validate_map(f)
    if not rep.ok:
        raise ValueError(rep.violation)
    return f


# constructions on complexes


def twist(c: LBComplex, k: int) -> LBComplex:
    return LBComplex(c.m, c.lo, c.hi, {i: tuple(d + k for d in t) for i, t in c.terms.items()}, c.diffs)


def shift_lb(c: LBComplex, k: int) -> LBComplex:
    """C[k]^i = C^{i+k}, differential multiplied by (-1)^k."""
    odd = k % 2 == 1
    return LBComplex(c.m, c.lo - k, c.hi - k, {i - k: t for i, t in c.terms.items()},
                     {i - k: (pm_neg(d) if odd else d) for i, d in c.diffs.items()})


def direct_sum_lb(*cs: LBComplex) -> LBComplex:
    m = cs[0].m
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    terms = {i: sum((c.term(i) for c in cs), ()) for i in range(lo, hi + 1)}
    diffs = {}
    for i in range(lo, hi):
        diffs[i] = pm_block([[c.d(i) if a == b else None for b, c in enumerate(cs)] for a in range(len(cs))],
                            [c.rank(i + 1) for c in cs], [c.rank(i) for c in cs], m + 1)
    return LBComplex(m, lo, hi, terms, diffs)


def cone_lb(f: LBMap) -> LBComplex:
    """Cone(f)^i = S^{i+1} + T^i with differential [[-d_S, 0], [f, d_T]]."""
    s, t = f.source, f.target
    lo = min(s.lo - 1, t.lo)
    hi = max(s.hi - 1, t.hi)
    terms = {i: s.term(i + 1) + t.term(i) for i in range(lo, hi + 1)}
    diffs = {}
    for i in range(lo, hi):
        diffs[i] = pm_block([[pm_neg(s.d(i + 1)), None], [f.f(i + 1), t.d(i)]],
                            [s.rank(i + 2), t.rank(i + 1)], [s.rank(i + 1), t.rank(i)], s.nvars)
    return LBComplex(s.m, lo, hi, terms, diffs).trimmed()


def tensor(a: LBComplex, b: LBComplex) -> LBComplex:
    """(A x B)^k = sum_{i+j=k} A^i x B^j, ordered by i, then A-summand, then B-summand.

    d(x (x) y) = dx (x) y + (-1)^i x (x) dy.
    """
    if a.m != b.m:
        raise ValueError("tensor of complexes on different projective spaces")
    nv = a.nvars
    lo, hi = a.lo + b.lo, a.hi + b.hi
    index: dict[int, dict[tuple[int, int, int], int]] = {}
    terms = {}
    for k in range(lo, hi + 1):
        idx = {}
        twists = []
        for i in range(a.lo, a.hi + 1):
            j = k - i
            for p, da in enumerate(a.term(i)):
                for q, db in enumerate(b.term(j)):
                    idx[(i, p, q)] = len(twists)
                    twists.append(da + db)
        index[k] = idx
        terms[k] = tuple(twists)
    diffs = {}
    for k in range(lo, hi):
        rows = [[HomogPoly(nv)] * len(terms[k]) for _ in range(len(terms[k + 1]))]
        tgt = index[k + 1]
        for (i, p, q), col in index[k].items():
            j = k - i
            da = a.d(i)
            for p2 in range(a.rank(i + 1)):
                x = da[p2][p]
                if x.terms:
                    r = tgt[(i + 1, p2, q)]
                    rows[r][col] = rows[r][col] + x
            db = b.d(j)
            sign = -1 if i % 2 else 1
            for q2 in range(b.rank(j + 1)):
                y = db[q2][q]
                if y.terms:
                    r = tgt[(i, p, q2)]
                    rows[r][col] = rows[r][col] + (y if sign == 1 else -y)
        diffs[k] = tuple(tuple(r) for r in rows)
    return LBComplex(a.m, lo, hi, terms, diffs).trimmed()


def sheaf_dual(c: LBComplex) -> LBComplex:
    """(C^v)^k = (C^{-k})^v with differential the plain transpose of d^{-k-1}.

    Any per-degree sign choice gives an isomorphic complex; the plain
    transpose makes double dualization the identity on the nose.
    """
    terms = {-i: tuple(-d for d in t) for i, t in c.terms.items()}
    diffs = {}
    for k in range(-c.hi, -c.lo):
        src = c.diffs[-k - 1]
        diffs[k] = pm_transpose(src, c.rank(-k), c.rank(-k - 1))
    return LBComplex(c.m, -c.hi, -c.lo, terms, diffs)


# maps


def identity_map(c: LBComplex) -> LBMap:
    return LBMap(c, c, {i: pm_identity(c.rank(i), c.nvars) for i in range(c.lo, c.hi + 1)})


def zero_map(s: LBComplex, t: LBComplex) -> LBMap:
    return LBMap(s, t, {})


def compose(g: LBMap, f: LBMap) -> LBMap:
    """g o f."""
    if f.target != g.source:
        raise ValueError("maps are not composable")
    nv = f.source.nvars
    degs = range(min(f.source.lo, g.target.lo), max(f.source.hi, g.target.hi) + 1)
    return LBMap(f.source, g.target,
                 {i: pm_mul(g.f(i), f.f(i), nv, f.target.rank(i), f.source.rank(i)) for i in degs})


def map_add(f: LBMap, g: LBMap) -> LBMap:
    if f.source != g.source or f.target != g.target:
        raise ValueError("maps have different source or target")
    return LBMap(f.source, f.target, {i: pm_add(f.f(i), g.f(i)) for i in f.degrees()})


def map_scale(f: LBMap, c) -> LBMap:
    return LBMap(f.source, f.target, {i: pm_scale(f.f(i), c) for i in f.degrees()})


def twist_map(f: LBMap, k: int) -> LBMap:
    return LBMap(twist(f.source, k), twist(f.target, k), f.components)


def shift_map_lb(f: LBMap, k: int) -> LBMap:
    return LBMap(shift_lb(f.source, k), shift_lb(f.target, k), {i - k: x for i, x in f.components.items()})


def dual_map(f: LBMap) -> LBMap:
    """For f: A -> B, the map B^v -> A^v given by transposed components."""
    s, t = f.source, f.target
    comps = {}
    for i in f.degrees():
        comps[-i] = pm_transpose(f.f(i), t.rank(i), s.rank(i))
    return LBMap(sheaf_dual(t), sheaf_dual(s), comps)


def tensor_maps(f: LBMap, g: LBMap) -> LBMap:
    """f (x) g for degree-zero chain maps (no Koszul sign arises)."""
    a, b = f.source, g.source
    a2, b2 = f.target, g.target
    src, tgt = tensor(a, b), tensor(a2, b2)
    nv = a.nvars

    def index(x: LBComplex, y: LBComplex, k: int) -> dict[tuple[int, int, int], int]:
        idx = {}
        n = 0
        for i in range(x.lo, x.hi + 1):
            for p in range(x.rank(i)):
                for q in range(y.rank(k - i)):
                    idx[(i, p, q)] = n
                    n += 1
        return idx

    comps = {}
    for k in range(min(src.lo, tgt.lo), max(src.hi, tgt.hi) + 1):
        si = index(a, b, k)
        ti = index(a2, b2, k)
        rows = [[HomogPoly(nv)] * len(si) for _ in range(len(ti))]
        for (i, p, q), col in si.items():
            j = k - i
            fi = f.f(i)
            gj = g.f(j)
            for p2 in range(a2.rank(i)):
                x = fi[p2][p]
                if not x.terms:
                    continue
                for q2 in range(b2.rank(j)):
                    y = gj[q2][q]
                    if y.terms:
                        r = ti[(i, p2, q2)]
                        rows[r][col] = rows[r][col] + x * y
        comps[k] = tuple(tuple(r) for r in rows)
    return LBMap(src, tgt, comps)


def cone_inclusion(f: LBMap) -> LBMap:
    """The canonical map T -> Cone(f)."""
    s, t = f.source, f.target
    c = cone_lb(f)
    nv = s.nvars
    comps = {}
    for i in range(t.lo, t.hi + 1):
        comps[i] = pm_block([[None], [pm_identity(t.rank(i), nv)]], [s.rank(i + 1), t.rank(i)], [t.rank(i)], nv)
    return LBMap(t, c, _restrict_components(comps, t, c))


def cone_projection_shifted(f: LBMap) -> LBMap:
    """The canonical map Cone(f)[-1] -> S."""
    s = f.source
    c = shift_lb(cone_lb(f), -1)
    nv = s.nvars
    comps = {}
    for i in range(s.lo, s.hi + 1):
        comps[i] = pm_block([[pm_identity(s.rank(i), nv), None]], [s.rank(i)], [s.rank(i), f.target.rank(i - 1)], nv)
    return LBMap(c, s, _restrict_components(comps, c, s))


def _restrict_components(comps: dict[int, PolyMatrix], s: LBComplex, t: LBComplex) -> dict[int, PolyMatrix]:
    out = {}
    for i, m in comps.items():
        if s.rank(i) or t.rank(i):
            out[i] = m
    return out


def is_zero_map(f: LBMap) -> bool:
    return all(pm_is_zero(f.f(i)) for i in f.degrees())
