"""Disk-level perverse data, the monodromy ledger, and diagrams
i_*M_0 <- M_1 <- ... <- M_{r-1} with their Hom complexes.

Angles and loop parameters are measured in full turns, so tau = 1 is one
full loop around the origin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Sequence

from .exactalg import (
    ComplexMap,
    RatMatrix,
    RationalChainComplex,
    cohomology_dims,
    cone,
    det,
    direct_sum,
    inverse,
    rank,
    shift,
    to_fraction,
)
from .hyper import HyperplaneData, push_i, push_map, twist_comparison
from .lbcx import (
    LBComplex,
    LBMap,
    dual_map,
    identity_map,
    is_equivalence,
    rgamma,
    shift_lb,
    sheaf_dual,
    tensor,
    tensor_maps,
    transfer_map,
    twist,
    direct_sum_lb,
    validate,
    validate_map,
)
from .lbcx.cech import _SmallModel, initial_floor, sufficient_floor
from .lbcx.poly import pm_block, pm_from_json, pm_identity, pm_to_json

# perverse sheaves on the disk


@dataclass(frozen=True)
class PerverseDiskDatum:
    """Phi, Psi with p: Phi -> Psi and q: Psi -> Phi."""

    p: RatMatrix
    q: RatMatrix

    def __post_init__(self) -> None:
        if self.p.rows != self.q.cols or self.p.cols != self.q.rows:
            raise ValueError(f"shape mismatch: p is {self.p.shape}, q is {self.q.shape}")

    @property
    def dim_phi(self) -> int:
        return self.p.cols

    @property
    def dim_psi(self) -> int:
        return self.p.rows

    @classmethod
    def from_lists(cls, p: Sequence[Sequence], q: Sequence[Sequence], dim_phi: int, dim_psi: int) -> "PerverseDiskDatum":
        pm = RatMatrix.from_rows(p, dim_phi) if dim_phi else RatMatrix.zeros(dim_psi, 0)
        qm = RatMatrix.from_rows(q, dim_psi) if dim_psi else RatMatrix.zeros(dim_phi, 0)
        if pm.shape != (dim_psi, dim_phi) or qm.shape != (dim_phi, dim_psi):
            raise ValueError(f"p must be {dim_psi}x{dim_phi} and q must be {dim_phi}x{dim_psi}")
        return cls(pm, qm)

    def to_json(self) -> dict:
        return {"dim_phi": self.dim_phi, "dim_psi": self.dim_psi, "p": self.p.to_json(), "q": self.q.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "PerverseDiskDatum":
        a, b = int(data["dim_phi"]), int(data["dim_psi"])
        return cls(RatMatrix.from_json(data["p"], b, a), RatMatrix.from_json(data["q"], a, b))


@dataclass(frozen=True)
class PerverseCheck:
    ok: bool
    failing: tuple[str, ...]
    det_phi: Fraction
    det_psi: Fraction


def _monodromy_matrices(d: PerverseDiskDatum) -> tuple[RatMatrix, RatMatrix]:
    m_phi = RatMatrix.identity(d.dim_phi) - d.q @ d.p
    m_psi = RatMatrix.identity(d.dim_psi) - d.p @ d.q
    return m_phi, m_psi


def check_perverse(d: PerverseDiskDatum) -> PerverseCheck:
    m_phi, m_psi = _monodromy_matrices(d)
    a, b = det(m_phi), det(m_psi)
    failing = tuple(name for name, v in (("m_phi", a), ("m_psi", b)) if v == 0)
    return PerverseCheck(not failing, failing, a, b)


@dataclass(frozen=True)
class Monodromies:
    m_phi: RatMatrix
    m_psi: RatMatrix
    inv_phi: RatMatrix
    inv_psi: RatMatrix


def monodromies(d: PerverseDiskDatum) -> Monodromies:
    chk = check_perverse(d)
    if not chk.ok:
        raise ValueError(f"monodromy not invertible: {', '.join(chk.failing)}")
    m_phi, m_psi = _monodromy_matrices(d)
    return Monodromies(m_phi, m_psi, inverse(m_phi), inverse(m_psi))


def intertwines(d: PerverseDiskDatum) -> bool:
    """p m_Phi = m_Psi p, an identity for all p, q."""
    m_phi, m_psi = _monodromy_matrices(d)
    return d.p @ m_phi == m_psi @ d.p


def has_no_origin_sections(d: PerverseDiskDatum) -> bool:
    """Hom from the origin skyscraper (Phi = k, Psi = 0) vanishes iff p is injective."""
    return rank(d.p) == d.dim_phi


# the monodromy ledger


@dataclass(frozen=True)
class MonodromyLedgerEntry:
    tau: Fraction  # in full turns

    def __post_init__(self) -> None:
        object.__setattr__(self, "tau", to_fraction(self.tau))

    @property
    def winding(self) -> int:
        return floor(self.tau)

    @property
    def theta(self) -> Fraction:
        return self.tau - self.winding

    @property
    def shift(self) -> int:
        return 2 * self.winding

    def to_json(self) -> dict:
        return {"tau_turns": str(self.tau), "winding": self.winding, "theta_turns": str(self.theta),
                "shift": self.shift}


def ledger_entry(tau) -> MonodromyLedgerEntry:
    return MonodromyLedgerEntry(to_fraction(tau))


def ledger_unit() -> MonodromyLedgerEntry:
    return MonodromyLedgerEntry(Fraction(0))


def ledger_compose(a: MonodromyLedgerEntry, b: MonodromyLedgerEntry) -> MonodromyLedgerEntry:
    return MonodromyLedgerEntry(a.tau + b.tau)


def ledger_inverse(a: MonodromyLedgerEntry) -> MonodromyLedgerEntry:
    return MonodromyLedgerEntry(-a.tau)


@dataclass(frozen=True)
class CoherentDescriptor:
    """Tensor with O(twist) followed by the shift [shift]."""

    twist: int
    shift: int

    def apply(self, c: LBComplex, extra_shift: int = 0) -> LBComplex:
        return shift_lb(twist(c, self.twist), self.shift + extra_shift)


def ledger_to_coherent(e: MonodromyLedgerEntry) -> CoherentDescriptor:
    if e.theta != 0:
        raise ValueError("only full loops (theta = 0) have a coherent counterpart")
    return CoherentDescriptor(-e.winding, 2 * e.winding)


def ledger_hyper_crosscheck(n: int, hd: HyperplaneData | None = None) -> dict[str, bool]:
    """The full loop shifted by [-2] predicts G -> G(-1); compare with the inverse twist T_Psi_l."""
    hd = hd or HyperplaneData(n)
    desc = ledger_to_coherent(ledger_entry(1))
    out = {}
    for j in range(n):
        g = LBComplex.line(n - 1, -j)
        predicted = desc.apply(g, extra_shift=-2)
        w = twist_comparison("TPsi_l", g, hd)
        out[f"O({-j})"] = w.source == predicted and is_equivalence(w)
    return out


# diagrams


@dataclass(frozen=True)
class SchoberDiagram:
    """i_*M_0 <- M_1 <- ... <- M_{r-1}.

    maps[0] is M_1 -> i_*M_0 and maps[j] is M_{j+1} -> M_j for j >= 1. For
    n = 1 there is no M_0 (it is zero) and maps[0] targets the zero complex.
    """

    n: int
    r: int
    m0: LBComplex | None
    ms: tuple[LBComplex, ...]
    maps: tuple[LBMap, ...]

    def hyperplane(self) -> HyperplaneData | None:
        return HyperplaneData(self.n) if self.n >= 2 else None

    def vertex(self, j: int) -> LBComplex:
        if j == 0:
            if self.n == 1 or self.m0 is None:
                return LBComplex.zero(self.n - 1)
            return push_i(self.m0, self.hyperplane())
        return self.ms[j - 1]

    def to_json(self) -> dict:
        return {
            "n": self.n, "r": self.r,
            "m0": self.m0.to_json() if self.m0 is not None else None,
            "ms": [m.to_json() for m in self.ms],
            "maps": [{"components": {str(k): pm_to_json(v) for k, v in f.components.items()}}
                     for f in self.maps],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SchoberDiagram":
        n, r = int(data["n"]), int(data["r"])
        m0 = LBComplex.from_json(data["m0"]) if data.get("m0") is not None else None
        ms = tuple(LBComplex.from_json(x) for x in data.get("ms", []))
        proto = cls(n, r, m0, ms, ())
        maps = []
        for j, fm in enumerate(data.get("maps", [])):
            src = proto.vertex(j + 1)
            tgt = proto.vertex(j)
            comps = {int(k): pm_from_json(v, n) for k, v in fm.get("components", {}).items()}
            maps.append(LBMap(src, tgt, comps))
        return cls(n, r, m0, ms, tuple(maps))


@dataclass(frozen=True)
class DiagramReport:
    ok: bool
    problems: tuple[str, ...]


def validate_diagram(dg: SchoberDiagram) -> DiagramReport:
    probs: list[str] = []
    if dg.n < 1:
        probs.append("n must be at least 1")
    if dg.r < 1:
        probs.append("r must be at least 1")
    if probs:
        return DiagramReport(False, tuple(probs))
    if dg.n == 1:
        if dg.m0 is not None and not dg.m0.is_trivially_zero():
            probs.append("n = 1 forces M_0 = 0")
    else:
        if dg.m0 is None:
            probs.append("M_0 is missing")
        elif dg.m0.m != dg.n - 2:
            probs.append(f"M_0 must live on P^{dg.n - 2}")
        elif not validate(dg.m0).ok:
            probs.append(f"M_0: {validate(dg.m0).violation}")
    if len(dg.ms) != dg.r - 1:
        probs.append(f"expected {dg.r - 1} objects M_1..M_{{r-1}}, got {len(dg.ms)}")
    if len(dg.maps) != len(dg.ms):
        probs.append(f"expected {len(dg.ms)} structure maps, got {len(dg.maps)}")
    for j, mj in enumerate(dg.ms, start=1):
        if mj.m != dg.n - 1:
            probs.append(f"M_{j} must live on P^{dg.n - 1}")
        else:
            rep = validate(mj)
            if not rep.ok:
                probs.append(f"M_{j}: {rep.violation}")
    if probs:
        return DiagramReport(False, tuple(probs))
    for j, f in enumerate(dg.maps, start=1):
        if f.source != dg.vertex(j) or f.target != dg.vertex(j - 1):
            probs.append(f"map {j}: wrong source or target")
            continue
        rep = validate_map(f)
        if not rep.ok:
            probs.append(f"map {j}: {rep.violation}")
    return DiagramReport(not probs, tuple(probs))


def _common_floor(objs: Sequence[LBComplex]) -> int:
    return max([1] + [max(sufficient_floor(c), initial_floor(c)) for c in objs])


def _small(c: LBComplex, floor_: int) -> RationalChainComplex:
    return _SmallModel(c, 0, floor_).small_complex()


def diagram_hom_complex(d1: SchoberDiagram, d2: SchoberDiagram) -> RationalChainComplex:
    """Total complex of sum_j RHom(X_j, Y_j) -> sum_{j>=1} RHom(X_j, Y_{j-1}), shifted by [-1].

    The map sends (phi_j) to (b_j phi_j - phi_{j-1} a_j) where a_j, b_j are the
    structure maps of the two diagrams. All terms are computed on P^{n-1};
    vertex 0 uses the pushed-forward objects.
    """
    for dg in (d1, d2):
        rep = validate_diagram(dg)
        if not rep.ok:
            raise ValueError("; ".join(rep.problems))
    if (d1.n, d1.r) != (d2.n, d2.r):
        raise ValueError("diagrams must share (n, r)")
    r = d1.r
    xs = [d1.vertex(j) for j in range(r)]
    ys = [d2.vertex(j) for j in range(r)]
    vert_objs = [tensor(sheaf_dual(xs[j]), ys[j]) for j in range(r)]
    arrow_objs = [tensor(sheaf_dual(xs[j]), ys[j - 1]) for j in range(1, r)]
    e = _common_floor(vert_objs + arrow_objs)
    for obj in vert_objs + arrow_objs:
        rgamma(obj)  # certification: stabilization and Euler characteristic
    verts = [_small(o, e) for o in vert_objs]
    arrows = [_small(o, e) for o in arrow_objs]
    v_total = direct_sum(*verts)
    if not arrows:
        return v_total
    a_total = direct_sum(*arrows)
    blocks: dict[tuple[int, int], ComplexMap] = {}
    for j in range(1, r):
        a_j = d1.maps[j - 1]  # X_j -> X_{j-1}
        b_j = d2.maps[j - 1]  # Y_j -> Y_{j-1}
        post = tensor_maps(identity_map(sheaf_dual(xs[j])), b_j)
        pre = tensor_maps(dual_map(a_j), identity_map(ys[j - 1]))
        blocks[(j - 1, j)] = transfer_map(post, 0, e)
        blocks[(j - 1, j - 1)] = transfer_map(pre, 0, e)
    lo = min(v_total.lo, a_total.lo)
    hi = max(v_total.hi, a_total.hi)
    comps = {}
    for k in range(lo, hi + 1):
        rows = [a.dim(k) for a in arrows]
        cols = [v.dim(k) for v in verts]
        grid = [[None] * len(verts) for _ in arrows]
        for (ai, vi), m in blocks.items():
            mat = m.f(k)
            if ai == vi - 1:
                grid[ai][vi] = mat
            else:
                grid[ai][vi] = -mat
        comps[k] = RatMatrix.block(grid, rows, cols)
    phi = ComplexMap(v_total, a_total, comps)
    return shift(cone(phi), -1)


def diagram_hom_dims(d1: SchoberDiagram, d2: SchoberDiagram) -> dict[int, int]:
    return cohomology_dims(diagram_hom_complex(d1, d2))


def diagram_direct_sum(d1: SchoberDiagram, d2: SchoberDiagram) -> SchoberDiagram:
    if (d1.n, d1.r) != (d2.n, d2.r):
        raise ValueError("diagrams must share (n, r)")
    m0 = None
    if d1.n >= 2:
        m0 = direct_sum_lb(d1.m0, d2.m0)
    ms = tuple(direct_sum_lb(a, b) for a, b in zip(d1.ms, d2.ms))
    proto = SchoberDiagram(d1.n, d1.r, m0, ms, ())
    maps = []
    for j, (f, g) in enumerate(zip(d1.maps, d2.maps), start=1):
        src, tgt = proto.vertex(j), proto.vertex(j - 1)
        comps = {}
        for k in range(min(src.lo, tgt.lo), max(src.hi, tgt.hi) + 1):
            comps[k] = pm_block([[f.f(k), None], [None, g.f(k)]],
                                [f.target.rank(k), g.target.rank(k)],
                                [f.source.rank(k), g.source.rank(k)], d1.n)
        maps.append(LBMap(src, tgt, comps))
    return SchoberDiagram(d1.n, d1.r, m0, ms, tuple(maps))


def interval_diagram(r: int, a: int, b: int) -> SchoberDiagram:
    """n = 1 diagram with Q at vertices a..b (1 <= a <= b <= r-1) and identity maps."""
    if not 1 <= a <= b <= r - 1:
        raise ValueError("need 1 <= a <= b <= r-1")
    ms = tuple(LBComplex.line(0, 0) if a <= j <= b else LBComplex.zero(0) for j in range(1, r))
    proto = SchoberDiagram(1, r, None, ms, ())
    maps = []
    for j in range(1, r):
        src, tgt = proto.vertex(j), proto.vertex(j - 1)
        if j - 1 >= a and j <= b:
            comps = {0: pm_identity(1, 1)}
        else:
            comps = {}
        maps.append(LBMap(src, tgt, comps))
    return SchoberDiagram(1, r, None, ms, tuple(maps))


def push_compatible_diagram(n: int, m0: LBComplex, m1: LBComplex, f: LBMap) -> SchoberDiagram:
    return SchoberDiagram(n, 2, m0, (m1,), (f,))


def unit_push_diagram(n: int, d: int = 0) -> SchoberDiagram:
    """(O_Y(d) <- O(d)) with the structure map the restriction O(d) -> i_*O_Y(d)."""
    hd = HyperplaneData(n)
    m0 = LBComplex.line(n - 2, d)
    m1 = LBComplex.line(n - 1, d)
    tgt = push_i(m0, hd)
    f = LBMap(m1, tgt, {0: pm_identity(1, n)})
    return SchoberDiagram(n, 2, m0, (m1,), (f,))


def diagram_json(dg: SchoberDiagram) -> str:
    return json.dumps(dg.to_json(), sort_keys=True)


__all__ = [
    "CoherentDescriptor", "DiagramReport", "Monodromies", "MonodromyLedgerEntry", "PerverseCheck",
    "PerverseDiskDatum", "SchoberDiagram", "check_perverse", "diagram_direct_sum", "diagram_hom_complex",
    "diagram_hom_dims", "has_no_origin_sections", "interval_diagram", "intertwines", "ledger_compose",
    "ledger_entry", "ledger_hyper_crosscheck", "ledger_inverse", "ledger_to_coherent", "ledger_unit",
    "monodromies", "push_map", "unit_push_diagram", "validate_diagram",
]
