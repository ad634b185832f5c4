"""Cellular sheaves on the circle R/Z marked at e = 0, their Hom tables,
convolution, and the comparison with line bundles on P^1.

A cell structure is a list of vertex positions 0 = x_0 < ... < x_{k-1} < 1.
Edge i runs from x_i to x_{i+1} (to 1 for the last edge). A cellular sheaf
assigns a complex to every cell and a chain map from each vertex to each of
its two adjacent edges: right[i] goes to edge i and left[i] to edge i-1.
Such data are representations of the vertex-to-edge incidence quiver, which
has no relations, so Hom is the two-term total complex

    sum_cells Hom(F(c), G(c)) -> sum_incidences Hom(F(v), G(E)),
    (phi_c) -> G(v->E) phi_v - phi_E F(v->E).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactalg import (
    ComplexMap,
    RatMatrix,
    RationalChainComplex,
    block_map,
    cohomology_dims,
    cone,
    hom_complex,
    hom_post,
    hom_pre,
    is_quasi_iso,
    shift,
    tensor_complex_maps,
    tensor_complexes,
    to_fraction,
)

Cell = tuple[str, int]  # ("v", i) or ("e", i)
Pos = tuple[Fraction, Fraction]  # (value in [0, 1], infinitesimal offset)


@dataclass(frozen=True)
class CellCircle:
    positions: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        pos = tuple(to_fraction(x) for x in self.positions)
        if not pos or pos[0] != 0:
            raise ValueError("the first vertex must be the marked point 0")
        if any(not 0 <= x < 1 for x in pos) or any(a >= b for a, b in zip(pos, pos[1:])):
            raise ValueError("positions must increase strictly within [0, 1)")
        object.__setattr__(self, "positions", pos)

    @classmethod
    def uniform(cls, k: int = 1) -> "CellCircle":
        if k < 1:
            raise ValueError("need at least one vertex")
        return cls(tuple(Fraction(i, k) for i in range(k)))

    @property
    def k(self) -> int:
        return len(self.positions)

    def cell_at(self, pos: Pos) -> Cell:
        v, eps = pos
        if v == 1:
            return ("e", self.k - 1)
        for i, x in enumerate(self.positions):
            if x == v:
                if eps == 0:
                    return ("v", i)
                return ("e", i) if eps > 0 else ("e", (i - 1) % self.k)
        i = max(i for i, x in enumerate(self.positions) if x < v)
        return ("e", i)

    def to_json(self) -> list[str]:
        return [str(x) for x in self.positions]


@dataclass(frozen=True)
class CellSheafComplex:
    circle: CellCircle
    vertices: tuple[RationalChainComplex, ...]
    edges: tuple[RationalChainComplex, ...]
    right: tuple[ComplexMap, ...]
    left: tuple[ComplexMap, ...]

    def __post_init__(self) -> None:
        k = self.circle.k
        if not (len(self.vertices) == len(self.edges) == len(self.right) == len(self.left) == k):
            raise ValueError("one stalk per cell and two maps per vertex are required")
        for i in range(k):
            if self.right[i].source != self.vertices[i] or self.right[i].target != self.edges[i]:
                raise ValueError(f"right map at vertex {i} has the wrong source or target")
            if self.left[i].source != self.vertices[i] or self.left[i].target != self.edges[(i - 1) % k]:
                raise ValueError(f"left map at vertex {i} has the wrong source or target")

    def stalk(self, c: Cell) -> RationalChainComplex:
        return self.vertices[c[1]] if c[0] == "v" else self.edges[c[1]]

    def generization(self, c: Cell, side: int, target: Cell) -> ComplexMap:
        """Map from cell c to an adjacent (or equal) edge; side is +1 for rightward."""
        if c == target:
            return ComplexMap.identity(self.stalk(c))
        if c[0] != "v" or target[0] != "e":
            raise ValueError(f"no generization from {c} to {target}")
        i = c[1]
        f = self.right[i] if side > 0 else self.left[i]
        expected = ("e", i) if side > 0 else ("e", (i - 1) % self.circle.k)
        if expected != target:
            raise ValueError(f"edge {target} is not on side {side} of vertex {i}")
        return f

    def in_window(self) -> bool:
        """No singular support away from e: both maps are quasi-isomorphisms at every other vertex."""
        return all(is_quasi_iso(self.right[i]) and is_quasi_iso(self.left[i]) for i in range(1, self.circle.k))

    def to_json(self) -> dict:
        return {
            "positions": self.circle.to_json(),
            "vertices": [v.to_json() for v in self.vertices],
            "edges": [e.to_json() for e in self.edges],
            "right": [_map_json(f) for f in self.right],
            "left": [_map_json(f) for f in self.left],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CellSheafComplex":
        circle = CellCircle(tuple(to_fraction(x) for x in data["positions"]))
        verts = tuple(RationalChainComplex.from_json(v) for v in data["vertices"])
        edges = tuple(RationalChainComplex.from_json(e) for e in data["edges"])
        k = circle.k
        right = tuple(_map_from_json(m, verts[i], edges[i]) for i, m in enumerate(data["right"]))
        left = tuple(_map_from_json(m, verts[i], edges[(i - 1) % k]) for i, m in enumerate(data["left"]))
        return cls(circle, verts, edges, right, left)


def _map_json(f: ComplexMap) -> dict:
    return {str(i): m.to_json() for i, m in f.components.items() if m.rows and m.cols}


def _map_from_json(data: dict, s: RationalChainComplex, t: RationalChainComplex) -> ComplexMap:
    return ComplexMap(s, t, {int(i): RatMatrix.from_json(m, t.dim(int(i)), s.dim(int(i))) for i, m in data.items()})


def _q(dim: int = 1) -> RationalChainComplex:
    return RationalChainComplex.single(dim, 0) if dim else RationalChainComplex.zero()


def _scalar_map(s: RationalChainComplex, t: RationalChainComplex, rows: Sequence[Sequence]) -> ComplexMap:
    if not s.dim(0) or not t.dim(0):
        return ComplexMap.zero(s, t)
    return ComplexMap(s, t, {0: RatMatrix.from_rows(rows, s.dim(0))})


def _constant_like(circle: CellCircle, vertex0: RationalChainComplex, right0: ComplexMap,
                   left0: ComplexMap) -> CellSheafComplex:
    k = circle.k
    q = _q()
    ident = ComplexMap.identity(q)
    verts = (vertex0,) + tuple(q for _ in range(1, k))
    edges = tuple(q for _ in range(k))
    right = (right0,) + tuple(ident for _ in range(1, k))
    left = (left0,) + tuple(ident for _ in range(1, k))
    return CellSheafComplex(circle, verts, edges, right, left)


def build_generator(which: str, circle: CellCircle | None = None) -> CellSheafComplex:
    """unit: the skyscraper at e; twist: the *-extension of the constant sheaf on S^1 - {e}.

    For the twist the stalk at e is the two branches (left, right) of the
    punctured neighbourhood; the right map projects to the right branch.
    """
    circle = circle or CellCircle.uniform(1)
    k = circle.k
    if which == "unit":
        q, z = _q(), _q(0)
        verts = (q,) + tuple(z for _ in range(1, k))
        edges = tuple(z for _ in range(k))
        right = tuple(ComplexMap.zero(verts[i], edges[i]) for i in range(k))
        left = tuple(ComplexMap.zero(verts[i], edges[(i - 1) % k]) for i in range(k))
        return CellSheafComplex(circle, verts, edges, right, left)
    if which == "twist":
        v0 = _q(2)
        q = _q()
        return _constant_like(circle, v0, _scalar_map(v0, q, [[0, 1]]), _scalar_map(v0, q, [[1, 0]]))
    if which == "constant":
        return local_system(1, circle)
    raise ValueError(f"unknown generator {which!r}; expected unit, twist or constant")


def local_system(lam, circle: CellCircle | None = None) -> CellSheafComplex:
    """Rank-one local system with monodromy lam, concentrated in the left map at e."""
    lam = to_fraction(lam)
    if lam == 0:
        raise ValueError("monodromy must be nonzero")
    circle = circle or CellCircle.uniform(1)
    q = _q()
    return _constant_like(circle, q, ComplexMap.identity(q), _scalar_map(q, q, [[lam]]))


# Hom


def cell_hom_complex(f: CellSheafComplex, g: CellSheafComplex) -> RationalChainComplex:
    if f.circle != g.circle:
        raise ValueError("cell structures differ; refine both to a common structure first")
    k = f.circle.k
    cells = [("v", i) for i in range(k)] + [("e", i) for i in range(k)]
    col_cx = [hom_complex(f.stalk(c), g.stalk(c)) for c in cells]
    incid = [(i, +1) for i in range(k)] + [(i, -1) for i in range(k)]
    row_cx = []
    blocks: dict[tuple[int, int], ComplexMap] = {}
    for r, (i, side) in enumerate(incid):
        e = i if side > 0 else (i - 1) % k
        fm = f.right[i] if side > 0 else f.left[i]
        gm = g.right[i] if side > 0 else g.left[i]
        row_cx.append(hom_complex(f.vertices[i], g.edges[e]))
        post = hom_post(gm, f.vertices[i])
        pre = hom_pre(fm, g.edges[e])
        blocks[(r, i)] = post
        blocks[(r, k + e)] = ComplexMap(pre.source, pre.target, {d: -m for d, m in pre.components.items()})
    phi = block_map(col_cx, row_cx, blocks)
    return shift(cone(phi), -1)


def cell_hom_dims(f: CellSheafComplex, g: CellSheafComplex) -> dict[int, int]:
    return cohomology_dims(cell_hom_complex(f, g))


# refinement


def refine(f: CellSheafComplex, new: CellCircle) -> CellSheafComplex:
    old = f.circle
    if not set(old.positions) <= set(new.positions):
        raise ValueError("the new cell structure must contain every old vertex")
    if new.positions[0] != 0:
        raise ValueError("the marked point must stay at 0")
    verts, edges, right, left = [], [], [], []
    for j, x in enumerate(new.positions):
        c = old.cell_at((x, Fraction(0)))
        verts.append(f.stalk(c))
    for j, x in enumerate(new.positions):
        c = old.cell_at((x, Fraction(1)))
        edges.append(f.stalk(c))
    for j, x in enumerate(new.positions):
        c = old.cell_at((x, Fraction(0)))
        if c[0] == "v":
            right.append(f.right[c[1]])
            left.append(f.left[c[1]])
        else:
            ident = ComplexMap.identity(f.edges[c[1]])
            right.append(ident)
            left.append(ident)
    return CellSheafComplex(new, tuple(verts), tuple(edges), tuple(right), tuple(left))


def subdivide(circle: CellCircle, m: int = 2) -> CellCircle:
    """Split every edge into m equal pieces."""
    pos = list(circle.positions) + [Fraction(1)]
    out = []
    for a, b in zip(pos, pos[1:]):
        out.extend(a + (b - a) * t / m for t in range(m))
    return CellCircle(tuple(out))


# convolution


def _norm(v: Fraction, eps: Fraction) -> Pos:
    v = v - (v.numerator // v.denominator)
    if v == 0 and eps < 0:
        return (Fraction(1), eps)
    return (v, eps)


@dataclass(frozen=True)
class _FiberPoint:
    pos: Pos
    p: int | None
    q: int | None


@dataclass
class _Fiber:
    z: Pos
    points: list[_FiberPoint]
    vcells: list[tuple[Cell, Cell]]
    ecells: list[tuple[Cell, Cell]]
    vstalks: list[RationalChainComplex]
    estalks: list[RationalChainComplex]
    complex: RationalChainComplex


def _fiber(f1: CellSheafComplex, f2: CellSheafComplex, z: Pos) -> _Fiber:
    """Cellular model of x -> F1(x) (x) F2(z - x) on the circle of x."""
    pts: dict[Pos, list] = {}
    for i, x in enumerate(f1.circle.positions):
        pts.setdefault((x, Fraction(0)), [None, None])[0] = i
    for j, y in enumerate(f2.circle.positions):
        pts.setdefault(_norm(z[0] - y, z[1]), [None, None])[1] = j
    order = sorted(pts)
    points = [_FiberPoint(pos, *pts[pos]) for pos in order]

    def y_of(pos: Pos) -> Pos:
        return _norm(z[0] - pos[0], z[1] - pos[1])

    vcells = []
    for pt in points:
        c1 = ("v", pt.p) if pt.p is not None else f1.circle.cell_at(pt.pos)
        c2 = ("v", pt.q) if pt.q is not None else f2.circle.cell_at(y_of(pt.pos))
        vcells.append((c1, c2))
    ecells = []
    n = len(points)
    for i in range(n):
        a = points[i].pos
        b = points[(i + 1) % n].pos if i + 1 < n else (points[0].pos[0] + 1, points[0].pos[1])
        mid = _norm((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        c1, c2 = f1.circle.cell_at(mid), f2.circle.cell_at(y_of(mid))
        if c1[0] != "e" or c2[0] != "e":
            raise AssertionError("fiber edge meets a vertex")
        ecells.append((c1, c2))
    vstalks = [tensor_complexes(f1.stalk(c1), f2.stalk(c2)) for c1, c2 in vcells]
    estalks = [tensor_complexes(f1.stalk(c1), f2.stalk(c2)) for c1, c2 in ecells]
    blocks: dict[tuple[int, int], ComplexMap] = {}
    for e in range(n):
        start, end = e, (e + 1) % n
        # x increases towards the edge from its start: F1 moves right, F2 (at z - x) moves left
        m_start = tensor_complex_maps(f1.generization(vcells[start][0], +1, ecells[e][0]),
                                      f2.generization(vcells[start][1], -1, ecells[e][1]))
        m_end = tensor_complex_maps(f1.generization(vcells[end][0], -1, ecells[e][0]),
                                    f2.generization(vcells[end][1], +1, ecells[e][1]))
        _add_block(blocks, (e, end), m_end, 1)
        _add_block(blocks, (e, start), m_start, -1)
    delta = block_map(vstalks, estalks, blocks)
    return _Fiber(z, points, vcells, ecells, vstalks, estalks, shift(cone(delta), -1))


def _add_block(blocks: dict, key: tuple[int, int], m: ComplexMap, sign: int) -> None:
    comps = {d: (x if sign > 0 else -x) for d, x in m.components.items()}
    if key in blocks:
        old = blocks[key]
        comps = {d: old.f(d) + comps.get(d, RatMatrix.zeros(*old.f(d).shape)) for d in old.components}
    blocks[key] = ComplexMap(m.source, m.target, comps)


def _rgamma_map(src: _Fiber, tgt: _Fiber, vblocks: dict, eblocks: dict) -> ComplexMap:
    """Block-diagonal map of Cone(delta)[-1] models from vertex and edge blocks."""
    vmap = block_map(src.vstalks, tgt.vstalks, vblocks)
    emap = block_map(src.estalks, tgt.estalks, eblocks)
    s, t = src.complex, tgt.complex
    comps = {}
    for d in range(min(s.lo, t.lo), max(s.hi, t.hi) + 1):
        rows = [vmap.target.dim(d), emap.target.dim(d - 1)]
        cols = [vmap.source.dim(d), emap.source.dim(d - 1)]
        if sum(rows) != t.dim(d) or sum(cols) != s.dim(d):
            raise AssertionError("fiber model dimensions disagree")
        comps[d] = RatMatrix.block([[vmap.f(d), None], [None, emap.f(d - 1)]], rows, cols)
    return ComplexMap(s, t, comps)


def _base(pos: Pos) -> Fraction:
    return Fraction(0) if pos[0] == 1 else pos[0]


def _specialize(f1: CellSheafComplex, f2: CellSheafComplex, at: _Fiber, near: _Fiber) -> ComplexMap:
    """Restriction from the fiber over z0 to the fiber over z0 +- epsilon."""
    side_z = 1 if near.z[1] > 0 else -1
    by_base = {_base(p.pos): i for i, p in enumerate(at.points)}
    vblocks = {}
    owner = []
    for j, pt in enumerate(near.points):
        i = by_base[_base(pt.pos)]
        owner.append(i)
        c1, c2 = at.vcells[i]
        d1, d2 = near.vcells[j]
        s1 = 1 if pt.pos[1] > 0 else -1
        s2 = 1 if side_z - pt.pos[1] > 0 else -1
        vblocks[(j, i)] = tensor_complex_maps(f1.generization(c1, s1, d1), f2.generization(c2, s2, d2))
    eblocks = {}
    n1 = len(near.points)
    for j in range(n1):
        a = near.points[j].pos
        b = near.points[j + 1].pos if j + 1 < n1 else (near.points[0].pos[0] + 1, near.points[0].pos[1])
        if a[0] == b[0]:
            continue  # infinitesimal edge created by splitting a collision point
        e = owner[j]
        if at.ecells[e] != near.ecells[j]:
            raise AssertionError("edge cells differ between special and nearby fibers")
        eblocks[(j, e)] = ComplexMap.identity(at.estalks[e])
    if len(eblocks) != len(at.points):
        raise AssertionError("nearby fiber does not refine the special fiber")
    return _rgamma_map(at, near, vblocks, eblocks)


def convolve(f1: CellSheafComplex, f2: CellSheafComplex) -> CellSheafComplex:
    """m_!(F1 [x] F2) for the group law on R/Z, computed fiber by fiber.

    Vertices of the result sit at the sums of input vertices. The stalk over an
    edge is modelled by the fiber just to the right of its left endpoint.
    """
    z_pos = sorted({_norm(a + b, Fraction(0))[0] for a in f1.circle.positions for b in f2.circle.positions})
    circle = CellCircle(tuple(z_pos))
    k = circle.k
    special = [_fiber(f1, f2, (z, Fraction(0))) for z in z_pos]
    right_near = [_fiber(f1, f2, (z, Fraction(1))) for z in z_pos]
    left_near = [_fiber(f1, f2, _norm(z, Fraction(-1))) for z in z_pos]
    for s in range(k):
        a, b = right_near[(s - 1) % k], left_near[s]
        if a.complex != b.complex or a.vcells != b.vcells or a.ecells != b.ecells:
            raise AssertionError("fibers at both ends of an edge disagree")
    verts = tuple(fb.complex for fb in special)
    edges = tuple(fb.complex for fb in right_near)
    right = tuple(_specialize(f1, f2, special[s], right_near[s]) for s in range(k))
    left = []
    for s in range(k):
        m = _specialize(f1, f2, special[s], left_near[s])
        left.append(ComplexMap(m.source, edges[(s - 1) % k], m.components))
    return CellSheafComplex(circle, verts, edges, right, tuple(left))


@dataclass(frozen=True)
class CellSheafMap:
    source: CellSheafComplex
    target: CellSheafComplex
    vertices: tuple[ComplexMap, ...]
    edges: tuple[ComplexMap, ...]

    def is_morphism(self) -> bool:
        s, t = self.source, self.target
        k = s.circle.k
        for i in range(k):
            if t.right[i].compose(self.vertices[i]) != self.edges[i].compose(s.right[i]):
                return False
            if t.left[i].compose(self.vertices[i]) != self.edges[(i - 1) % k].compose(s.left[i]):
                return False
        return True

    def is_quasi_iso(self) -> bool:
        return all(is_quasi_iso(m) for m in self.vertices + self.edges)


def unit_comparison(g: CellSheafComplex) -> CellSheafMap:
    """G -> unit * G, the inclusion of each stalk as the fiber point x = e."""
    unit = build_generator("unit")
    conv = convolve(unit, g)
    if conv.circle != g.circle:
        raise AssertionError("unit convolution changed the cell structure")

    def incl(src: RationalChainComplex, tgt: RationalChainComplex) -> ComplexMap:
        comps = {}
        for d in range(src.lo, src.hi + 1):
            n = src.dim(d)
            if n:
                comps[d] = RatMatrix.block([[RatMatrix.identity(n)], [None]], [n, tgt.dim(d) - n], [n])
        return ComplexMap(src, tgt, comps)

    verts = tuple(incl(g.vertices[i], conv.vertices[i]) for i in range(g.circle.k))
    edges = tuple(incl(g.edges[i], conv.edges[i]) for i in range(g.circle.k))
    return CellSheafMap(g, conv, verts, edges)


# comparison with P^1


COHERENT_TWIST = {"unit": 0, "twist": -1}


def coherent_table(a: int, b: int) -> dict[int, int]:
    from .lbcx import LBComplex, rhom_dims

    return rhom_dims(LBComplex.line(1, a), LBComplex.line(1, b))


@dataclass
class CCCReport:
    grid_cellular: dict
    grid_coherent: dict
    square_cellular: dict
    square_coherent: dict
    mismatches: list[str]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        def enc(g: dict) -> dict:
            return {k: {str(d): v for d, v in sorted(t.items())} for k, t in g.items()}

        return {"ok": self.ok, "grid_cellular": enc(self.grid_cellular), "grid_coherent": enc(self.grid_coherent),
                "square_cellular": enc(self.square_cellular), "square_coherent": enc(self.square_coherent),
                "mismatches": self.mismatches}


def ccc_compare() -> CCCReport:
    gens = {name: build_generator(name) for name in COHERENT_TWIST}
    cell, coh = {}, {}
    for a, fa in gens.items():
        for b, fb in gens.items():
            key = f"{a}->{b}"
            cell[key] = cell_hom_dims(fa, fb)
            coh[key] = coherent_table(COHERENT_TWIST[a], COHERENT_TWIST[b])
    sq = convolve(gens["twist"], gens["twist"])
    sq_cell, sq_coh = {}, {}
    for name, fg in gens.items():
        t = COHERENT_TWIST[name]
        sq_cell[f"{name}->twist*twist"] = cell_hom_dims(fg, sq)
        sq_coh[f"{name}->twist*twist"] = coherent_table(t, -2)
        sq_cell[f"twist*twist->{name}"] = cell_hom_dims(sq, fg)
        sq_coh[f"twist*twist->{name}"] = coherent_table(-2, t)
    bad = [f"{k}: cellular {cell[k]} vs coherent {coh[k]}" for k in cell if cell[k] != coh[k]]
    bad += [f"{k}: cellular {sq_cell[k]} vs coherent {sq_coh[k]}" for k in sq_cell if sq_cell[k] != sq_coh[k]]
    return CCCReport(cell, coh, sq_cell, sq_coh, bad)


@dataclass
class LocalSystemReport:
    lam: Fraction
    self_ext: dict[int, int]
    others: dict[str, dict[int, int]]
    torsion_self: dict[int, int]
    torsion_others: dict[str, dict[int, int]]

    @property
    def ok(self) -> bool:
        return (self.self_ext == {0: 1, 1: 1} == self.torsion_self
                and all(not t for t in self.others.values())
                and self.others == self.torsion_others)

    def to_json(self) -> dict:
        def enc(t: dict) -> dict:
            return {str(d): v for d, v in sorted(t.items())}

        return {"lambda": str(self.lam), "ok": self.ok, "self_ext": enc(self.self_ext),
                "others": {k: enc(v) for k, v in self.others.items()}, "torsion_self": enc(self.torsion_self),
                "torsion_others": {k: enc(v) for k, v in self.torsion_others.items()}}


def torsion_point(lam) -> "object":
    """Skyscraper at [1 : lam] on P^1 as the cone of O(-1) -> O, s = x1 - lam x0."""
    from .lbcx import LBComplex
    from .lbcx.poly import HomogPoly

    return LBComplex.two_term(1, -1, 0, HomogPoly.linear([-to_fraction(lam), 1]))


def local_system_check(lam, others: Sequence = ()) -> LocalSystemReport:
    from .lbcx import rhom_dims

    lam = to_fraction(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    others = [to_fraction(x) for x in others] or [lam + 1]
    ls = local_system(lam)
    tp = torsion_point(lam)
    oth, toth = {}, {}
    for mu in others:
        if mu == 0 or mu == lam:
            continue
        oth[str(mu)] = cell_hom_dims(ls, local_system(mu))
        toth[str(mu)] = rhom_dims(tp, torsion_point(mu))
    return LocalSystemReport(lam, cell_hom_dims(ls, ls), oth, rhom_dims(tp, tp), toth)


def sheaf_json(f: CellSheafComplex) -> str:
    return json.dumps(f.to_json(), sort_keys=True)


__all__ = [
    "CCCReport", "CellCircle", "CellSheafComplex", "CellSheafMap", "LocalSystemReport", "build_generator",
    "ccc_compare", "cell_hom_complex", "cell_hom_dims", "coherent_table", "convolve", "local_system",
    "local_system_check", "refine", "sheaf_json", "subdivide", "torsion_point", "unit_comparison",
]
