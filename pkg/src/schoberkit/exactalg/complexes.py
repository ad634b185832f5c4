"""Bounded cochain complexes of finite-dimensional rational vector spaces.

Convention: cohomological degrees, d_i maps degree i to degree i+1 and is
stored as a (dim_{i+1} x dim_i) matrix acting on column vectors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .matrix import RatMatrix, Vector, ZERO, complement_basis, rank, rank_kernel_image, solve


@dataclass(frozen=True)
class RationalChainComplex:
    lo: int
    hi: int
    dims: Mapping[int, int]
    diffs: Mapping[int, RatMatrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        dims = {i: int(self.dims.get(i, 0)) for i in range(self.lo, self.hi + 1)}
        if any(v < 0 for v in dims.values()):
            raise ValueError("negative dimension")
        diffs = {}
        for i in range(self.lo, self.hi):
            d = self.diffs.get(i)
            shape = (dims[i + 1], dims[i])
            if d is None:
                d = RatMatrix.zeros(*shape)
            if d.shape != shape:
                raise ValueError(f"differential d_{i} has shape {d.shape}, expected {shape}")
            diffs[i] = d
        extra = [i for i in self.diffs if i not in diffs and not self.diffs[i].is_zero()]
        if extra:
            raise ValueError(f"differentials outside the degree range: {extra}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "diffs", diffs)
        for i in range(self.lo, self.hi - 1):
            if not (diffs[i + 1] @ diffs[i]).is_zero():
                raise ValueError(f"d_{i + 1} o d_{i} != 0")

    @classmethod
    def build(cls, dims: Mapping[int, int], diffs: Mapping[int, RatMatrix] | None = None) -> "RationalChainComplex":
        """Construct with the degree range inferred from the nonzero dims."""
        nz = [i for i, v in dims.items() if v]
        if not nz:
            return cls.zero()
        lo, hi = min(nz), max(nz)
        diffs = {i: d for i, d in (diffs or {}).items() if lo <= i < hi}
        return cls(lo, hi, {i: dims.get(i, 0) for i in range(lo, hi + 1)}, diffs)

    @classmethod
    def zero(cls) -> "RationalChainComplex":
        return cls(0, 0, {0: 0}, {})

    @classmethod
    def single(cls, dim: int, degree: int = 0) -> "RationalChainComplex":
        return cls(degree, degree, {degree: dim}, {})

    def dim(self, i: int) -> int:
        return self.dims.get(i, 0)

    def d(self, i: int) -> RatMatrix:
        """Differential from degree i to i+1, zero-padded outside the range."""
        if self.lo <= i < self.hi:
            return self.diffs[i]
        return RatMatrix.zeros(self.dim(i + 1), self.dim(i))

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def to_json(self) -> dict:
        return {
            "range": [self.lo, self.hi],
            "dims": {str(i): v for i, v in self.dims.items()},
            "diffs": {str(i): d.to_json() for i, d in self.diffs.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "RationalChainComplex":
        lo, hi = data["range"]
        dims = {int(k): int(v) for k, v in data["dims"].items()}
        diffs = {}
        for k, rows in data.get("diffs", {}).items():
            i = int(k)
            diffs[i] = RatMatrix.from_json(rows, dims.get(i + 1, 0), dims.get(i, 0))
        return cls(lo, hi, dims, diffs)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class ComplexMap:
    source: RationalChainComplex
    target: RationalChainComplex
    components: Mapping[int, RatMatrix]

    def __post_init__(self) -> None:
        comps = {}
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for i in range(lo, hi + 1):
            shape = (self.target.dim(i), self.source.dim(i))
            f = self.components.get(i)
            if f is None:
                f = RatMatrix.zeros(*shape)
            if f.shape != shape:
                raise ValueError(f"component {i} has shape {f.shape}, expected {shape}")
            comps[i] = f
        object.__setattr__(self, "components", comps)
        for i in range(lo - 1, hi + 1):
            lhs = self.target.d(i) @ self.f(i)
            rhs = self.f(i + 1) @ self.source.d(i)
            if lhs != rhs:
                raise ValueError(f"not a chain map: square at degree {i} does not commute")

    def f(self, i: int) -> RatMatrix:
        comp = self.components.get(i)
        if comp is None:
            return RatMatrix.zeros(self.target.dim(i), self.source.dim(i))
        return comp

    @classmethod
    def identity(cls, c: RationalChainComplex) -> "ComplexMap":
        return cls(c, c, {i: RatMatrix.identity(c.dim(i)) for i in c.dims})

    @classmethod
    def zero(cls, s: RationalChainComplex, t: RationalChainComplex) -> "ComplexMap":
        return cls(s, t, {})

    def compose(self, other: "ComplexMap") -> "ComplexMap":
        """self o other."""
        if other.target != self.source:
            raise ValueError("composition of non-composable maps")
        degs = set(other.source.dims) | set(self.target.dims)
        return ComplexMap(other.source, self.target, {i: self.f(i) @ other.f(i) for i in degs})


@dataclass(frozen=True)
class Cohomology:
    degree: int
    dim: int
    basis: list[Vector]


def cohomology(c: RationalChainComplex, i: int) -> Cohomology:
    """dim H^i and cycle representatives of a basis."""
    n = c.dim(i)
    if n == 0:
        return Cohomology(i, 0, [])
    cycles = rank_kernel_image(c.d(i)).kernel
    boundaries = rank_kernel_image(c.d(i - 1)).image
    picks = complement_basis(boundaries, cycles, n)
    basis = [cycles[k] for k in picks]
    return Cohomology(i, len(basis), basis)


def cohomology_dims(c: RationalChainComplex) -> dict[int, int]:
    """All nonzero cohomology dimensions, via ranks only."""
    ranks = {i: rank(c.d(i)) for i in range(c.lo - 1, c.hi + 1)}
    out = {}
    for i in range(c.lo, c.hi + 1):
        h = c.dim(i) - ranks[i] - ranks[i - 1]
        if h:
            out[i] = h
    return out


def is_acyclic(c: RationalChainComplex) -> bool:
    return not cohomology_dims(c)


def euler_characteristic(c: RationalChainComplex) -> int:
    return sum((-1) ** (i % 2) * v for i, v in c.dims.items())


def shift(c: RationalChainComplex, k: int) -> RationalChainComplex:
    """C[k]^i = C^{i+k}, with the differential multiplied by (-1)^k."""
    sign = -1 if k % 2 else 1
    return RationalChainComplex(
        c.lo - k, c.hi - k,
        {i - k: v for i, v in c.dims.items()},
        {i - k: (d if sign == 1 else -d) for i, d in c.diffs.items()},
    )


def shift_map(f: ComplexMap, k: int) -> ComplexMap:
    return ComplexMap(shift(f.source, k), shift(f.target, k), {i - k: m for i, m in f.components.items()})


def direct_sum(*cs: RationalChainComplex) -> RationalChainComplex:
    if not cs:
        return RationalChainComplex.zero()
    lo = min(c.lo for c in cs)
    hi = max(c.hi for c in cs)
    dims = {i: sum(c.dim(i) for c in cs) for i in range(lo, hi + 1)}
    diffs = {}
    for i in range(lo, hi):
        diffs[i] = RatMatrix.block(
            [[c.d(i) if a == b else None for b, c in enumerate(cs)] for a, _ in enumerate(cs)],
            [c.dim(i + 1) for c in cs], [c.dim(i) for c in cs])
    return RationalChainComplex(lo, hi, dims, diffs)


def cone(f: ComplexMap) -> RationalChainComplex:
    """Cone(f)^i = S^{i+1} + T^i, differential [[-d_S, 0], [f, d_T]]."""
    s, t = f.source, f.target
    lo = min(s.lo - 1, t.lo)
    hi = max(s.hi - 1, t.hi)
    dims = {i: s.dim(i + 1) + t.dim(i) for i in range(lo, hi + 1)}
    diffs = {}
    for i in range(lo, hi):
        diffs[i] = RatMatrix.block(
            [[-s.d(i + 1), None], [f.f(i + 1), t.d(i)]],
            [s.dim(i + 2), t.dim(i + 1)], [s.dim(i + 1), t.dim(i)])
    return _trim(RationalChainComplex(lo, hi, dims, diffs))


def hom_complex(c: RationalChainComplex, d: RationalChainComplex) -> RationalChainComplex:
    """Hom^k = sum_i Hom(C^i, D^{i+k}); differential phi -> d_D phi - (-1)^k phi d_C.

    A homomorphism C^i -> D^{i+k} is flattened row-major into its block.
    """
    lo = d.lo - c.hi
    hi = d.hi - c.lo
    layout: dict[int, list[tuple[int, int]]] = {}
    dims = {}
    for k in range(lo, hi + 1):
        blocks = []
        off = 0
        for i in range(c.lo, c.hi + 1):
            size = c.dim(i) * d.dim(i + k)
            if size:
                blocks.append((i, off))
                off += size
        layout[k] = blocks
        dims[k] = off
    diffs = {}
    for k in range(lo, hi):
        sign = -1 if k % 2 else 1
        rows = [[ZERO] * dims[k] for _ in range(dims[k + 1])]
        tgt_off = {i: o for i, o in layout[k + 1]}
        for i, off in layout[k]:
            a, b = c.dim(i), d.dim(i + k)
            dd = d.d(i + k)
            for r in range(b):
                for s in range(a):
                    col = off + r * a + s
                    # d_D o E_{rs}: lands in Hom(C^i, D^{i+k+1})
                    if i in tgt_off:
                        o2 = tgt_off[i]
                        for r2 in range(d.dim(i + k + 1)):
                            x = dd.entries[r2][r]
                            if x:
                                rows[o2 + r2 * a + s][col] += x
                    # -(-1)^k E_{rs} o d_C: lands in Hom(C^{i-1}, D^{i+k})
                    if i - 1 in tgt_off:
                        o2 = tgt_off[i - 1]
                        dc = c.d(i - 1)
                        a2 = c.dim(i - 1)
                        for s2 in range(a2):
                            x = dc.entries[s][s2]
                            if x:
                                rows[o2 + r * a2 + s2][col] -= sign * x
        diffs[k] = RatMatrix(dims[k + 1], dims[k], tuple(tuple(r) for r in rows))
    return RationalChainComplex(lo, hi, dims, diffs)


def is_quasi_iso(f: ComplexMap) -> bool:
    return is_acyclic(cone(f))


def _trim(c: RationalChainComplex) -> RationalChainComplex:
    nz = [i for i, v in c.dims.items() if v]
    if not nz:
        return RationalChainComplex.zero()
    lo, hi = min(nz), max(nz)
    if (lo, hi) == (c.lo, c.hi):
        return c
    return RationalChainComplex(lo, hi, {i: c.dims[i] for i in range(lo, hi + 1)},
                                {i: c.diffs[i] for i in range(lo, hi)})


def cohomology_map(f: ComplexMap, i: int) -> RatMatrix:
    """Matrix of H^i(f) in the bases returned by `cohomology`."""
    hs = cohomology(f.source, i)
    ht = cohomology(f.target, i)
    coords = cohomology_coordinates(f.target, i, [f.f(i).apply(v) for v in hs.basis], ht)
    return RatMatrix.from_columns(coords, ht.dim)


def cohomology_coordinates(c: RationalChainComplex, i: int, cycles: list[Vector],
                           h: Cohomology | None = None) -> list[Vector]:
    """Coordinates of cycle classes in the cohomology basis of degree i."""
    h = h or cohomology(c, i)
    boundaries = rank_kernel_image(c.d(i - 1)).image
    n = c.dim(i)
    a = RatMatrix.from_columns(list(h.basis) + boundaries, n) if n else RatMatrix.zeros(0, 0)
    out = []
    for z in cycles:
        if n == 0:
            out.append(())
            continue
        x = solve(a, z)
        if x is None:
            raise ValueError("vector is not a cycle")
        out.append(tuple(x[: h.dim]))
    return out


__all__ = [
    "RationalChainComplex", "ComplexMap", "Cohomology", "cohomology", "cohomology_dims",
    "cohomology_map", "cohomology_coordinates", "cone", "shift", "shift_map", "direct_sum",
    "hom_complex", "is_quasi_iso", "is_acyclic", "euler_characteristic"
]


def _hom_layout(c: RationalChainComplex, d: RationalChainComplex, k: int) -> dict[int, int]:
    out = {}
    off = 0
    for i in range(c.lo, c.hi + 1):
        size = c.dim(i) * d.dim(i + k)
        if size:
            out[i] = off
            off += size
    return out


def hom_post(g: ComplexMap, c: RationalChainComplex) -> ComplexMap:
    """phi -> g o phi, from Hom(C, D) to Hom(C, D')."""
    src = hom_complex(c, g.source)
    tgt = hom_complex(c, g.target)
    comps = {}
    for k in range(min(src.lo, tgt.lo), max(src.hi, tgt.hi) + 1):
        if not (src.dim(k) and tgt.dim(k)):
            continue
        ls, lt = _hom_layout(c, g.source, k), _hom_layout(c, g.target, k)
        rows = [[ZERO] * src.dim(k) for _ in range(tgt.dim(k))]
        for i, off in ls.items():
            if i not in lt:
                continue
            a = c.dim(i)
            gm = g.f(i + k)
            o2 = lt[i]
            for r in range(g.source.dim(i + k)):
                for s in range(a):
                    col = off + r * a + s
                    for r2 in range(gm.rows):
                        x = gm.entries[r2][r]
                        if x:
                            rows[o2 + r2 * a + s][col] += x
        comps[k] = RatMatrix(tgt.dim(k), src.dim(k), tuple(tuple(r) for r in rows))
    return ComplexMap(src, tgt, comps)


def hom_pre(f: ComplexMap, d: RationalChainComplex) -> ComplexMap:
    """phi -> phi o f, from Hom(C, D) to Hom(C', D) for f: C' -> C."""
    src = hom_complex(f.target, d)
    tgt = hom_complex(f.source, d)
    comps = {}
    for k in range(min(src.lo, tgt.lo), max(src.hi, tgt.hi) + 1):
        if not (src.dim(k) and tgt.dim(k)):
            continue
        ls, lt = _hom_layout(f.target, d, k), _hom_layout(f.source, d, k)
        rows = [[ZERO] * src.dim(k) for _ in range(tgt.dim(k))]
        for i, off in ls.items():
            if i not in lt:
                continue
            a, a2 = f.target.dim(i), f.source.dim(i)
            fm = f.f(i)
            o2 = lt[i]
            for r in range(d.dim(i + k)):
                for s in range(a):
                    col = off + r * a + s
                    for s2 in range(a2):
                        x = fm.entries[s][s2]
                        if x:
                            rows[o2 + r * a2 + s2][col] += x
        comps[k] = RatMatrix(tgt.dim(k), src.dim(k), tuple(tuple(r) for r in rows))
    return ComplexMap(src, tgt, comps)


def tensor_complexes(a: RationalChainComplex, b: RationalChainComplex) -> RationalChainComplex:
    """(A (x) B)^n = sum_{i+j=n} A^i (x) B^j ordered by i; basis x (x) y at x * dim B^j + y.

    d(x (x) y) = dx (x) y + (-1)^i x (x) dy.
    """
    if not a.total_dim() or not b.total_dim():
        return RationalChainComplex.zero()
    lo, hi = a.lo + b.lo, a.hi + b.hi
    layout = {n: _tensor_layout(a, b, n) for n in range(lo, hi + 1)}
    dims = {n: sum(a.dim(i) * b.dim(n - i) for i in layout[n]) for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        rows = [[ZERO] * dims[n] for _ in range(dims[n + 1])]
        tgt = layout[n + 1]
        for i, off in layout[n].items():
            j = n - i
            da, db = a.d(i), b.d(j)
            na, nb = a.dim(i), b.dim(j)
            sign = -1 if i % 2 else 1
            for x in range(na):
                for y in range(nb):
                    col = off + x * nb + y
                    if i + 1 in tgt:
                        o2, nb2 = tgt[i + 1], b.dim(j)
                        for x2 in range(a.dim(i + 1)):
                            v = da.entries[x2][x]
                            if v:
                                rows[o2 + x2 * nb2 + y][col] += v
                    if i in tgt:
                        o2, nb2 = tgt[i], b.dim(j + 1)
                        for y2 in range(nb2):
                            v = db.entries[y2][y]
                            if v:
                                rows[o2 + x * nb2 + y2][col] += sign * v
        diffs[n] = RatMatrix(dims[n + 1], dims[n], tuple(tuple(r) for r in rows))
    return _trim(RationalChainComplex(lo, hi, dims, diffs))


def _tensor_layout(a: RationalChainComplex, b: RationalChainComplex, n: int) -> dict[int, int]:
    out = {}
    off = 0
    for i in range(a.lo, a.hi + 1):
        size = a.dim(i) * b.dim(n - i)
        if size:
            out[i] = off
            off += size
    return out


def tensor_complex_maps(f: ComplexMap, g: ComplexMap) -> ComplexMap:
    """f (x) g for degree-zero chain maps (no Koszul sign arises)."""
    src = tensor_complexes(f.source, g.source)
    tgt = tensor_complexes(f.target, g.target)
    comps = {}
    for n in range(min(src.lo, tgt.lo), max(src.hi, tgt.hi) + 1):
        if not (src.dim(n) and tgt.dim(n)):
            continue
        ls = _tensor_layout(f.source, g.source, n)
        lt = _tensor_layout(f.target, g.target, n)
        rows = [[ZERO] * src.dim(n) for _ in range(tgt.dim(n))]
        for i, off in ls.items():
            if i not in lt:
                continue
            j = n - i
            fm, gm = f.f(i), g.f(j)
            nb, nb2 = g.source.dim(j), g.target.dim(j)
            o2 = lt[i]
            for x in range(fm.cols):
                for x2 in range(fm.rows):
                    u = fm.entries[x2][x]
                    if not u:
                        continue
                    for y in range(nb):
                        for y2 in range(nb2):
                            v = gm.entries[y2][y]
                            if v:
                                rows[o2 + x2 * nb2 + y2][off + x * nb + y] += u * v
        comps[n] = RatMatrix(tgt.dim(n), src.dim(n), tuple(tuple(r) for r in rows))
    return ComplexMap(src, tgt, comps)


def block_map(sources: Sequence[RationalChainComplex], targets: Sequence[RationalChainComplex],
              blocks: Mapping[tuple[int, int], ComplexMap]) -> ComplexMap:
    """Chain map between direct sums; blocks[(t, s)] maps sources[s] to targets[t]."""
    src = direct_sum(*sources)
    tgt = direct_sum(*targets)
    comps = {}
    for k in range(min(src.lo, tgt.lo), max(src.hi, tgt.hi) + 1):
        rows = [t.dim(k) for t in targets]
        cols = [s.dim(k) for s in sources]
        grid: list[list[RatMatrix | None]] = [[None] * len(sources) for _ in targets]
        for (ti, si), m in blocks.items():
            grid[ti][si] = m.f(k)
        comps[k] = RatMatrix.block(grid, rows, cols)
    return ComplexMap(src, tgt, comps)
