"""The fan of P^{n-1}, strata of the Lagrangian skeleton, and the canonical
section homeomorphisms h_0 and h = g x w.

Angles are exact rationals measured in full turns (1 = a full circle). A
point of the quotient space (t°)* is stored in coordinates that eliminate
one index k: the class of u in Q^n / Q(1,...,1) becomes (u_a - u_k)_{a != k}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exactalg import RatMatrix, rank, solve, to_fraction

Vec = tuple[Fraction, ...]


# the fan


@dataclass(frozen=True)
class FanData:
    n: int
    eliminate: int
    rays: tuple[tuple[int, ...], ...]
    cones: dict = field(compare=False, hash=False, repr=False)

    @property
    def dim(self) -> int:
        return self.n - 1

    def quotient(self, u: Sequence) -> Vec:
        """Coordinates of the class of u in Q^n / Q(1,...,1)."""
        k = self.eliminate
        u = [to_fraction(x) for x in u]
        return tuple(u[a] - u[k] for a in range(self.n) if a != k)

    def lift(self, c: Sequence) -> Vec:
        """Representative with u_k = 0."""
        it = iter(to_fraction(x) for x in c)
        return tuple(Fraction(0) if a == self.eliminate else next(it) for a in range(self.n))

    def combination(self, coeffs: Sequence) -> Vec:
        """sum_a coeffs[a] * ebar_a."""
        out = [Fraction(0)] * self.dim
        for a, w in enumerate(coeffs):
            w = to_fraction(w)
            if w:
                for i, x in enumerate(self.rays[a]):
                    out[i] += w * x
        return tuple(out)


def build_projective_fan(n: int, eliminate: int | None = None) -> FanData:
    """Rays ebar_a = images of e_a; cones indexed by nonempty subsets J (0-based)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    k = n - 1 if eliminate is None else eliminate % n
    rays = []
    for a in range(n):
        e = [0] * n
        e[a] = 1
        rays.append(tuple(e[b] - e[k] for b in range(n) if b != k))
    fan = FanData(n, k, tuple(rays), {})
    for size in range(1, n + 1):
        for j in combinations(range(n), size):
            fan.cones[frozenset(j)] = tuple(a for a in range(n) if a not in j)
    return fan


@dataclass(frozen=True)
class ConeData:
    subset: frozenset
    generators: tuple[int, ...]  # ray indices a not in J
    generator_vectors: tuple[tuple[int, ...], ...]
    perp_basis: tuple[tuple[int, ...], ...]  # basis of sigma-perp inside t° = {v : sum v = 0}

    @property
    def dim(self) -> int:
        return len(self.generators)


def cone_for_subset(fan: FanData, subset: Iterable[int]) -> ConeData:
    j = frozenset(subset)
    if not j:
        raise ValueError("the subset must be nonempty")
    if not j <= set(range(fan.n)):
        raise ValueError("subset out of range")
    gens = tuple(a for a in range(fan.n) if a not in j)
    members = sorted(j)
    perp = []
    for b in members[1:]:
        v = [0] * fan.n
        v[members[0]] = 1
        v[b] = -1
        perp.append(tuple(v))
    return ConeData(j, gens, tuple(fan.rays[a] for a in gens), tuple(perp))


def cone_dimension_check(fan: FanData, subset: Iterable[int]) -> bool:
    """dim sigma + dim sigma-perp = n - 1, with both dimensions computed as ranks."""
    cd = cone_for_subset(fan, subset)
    ds = rank(RatMatrix.from_rows(cd.generator_vectors, fan.dim)) if cd.generators and fan.dim else 0
    dp = rank(RatMatrix.from_rows(cd.perp_basis, fan.n)) if cd.perp_basis else 0
    # sigma-perp must pair to zero with the lifted generators e_a, a not in J
    for v in cd.perp_basis:
        if sum(v) != 0 or any(v[a] for a in cd.generators):
            return False
    return ds + dp == fan.n - 1


def locate_cone(fan: FanData, x: Sequence) -> tuple[frozenset, Vec]:
    """Unique J with x in the relatively open cone sigma_J, and nonnegative coefficients on the rays."""
    u = fan.lift(x)
    m = min(u) if u else Fraction(0)
    lam = tuple(a - m for a in u)
    return frozenset(a for a in range(fan.n) if lam[a] == 0), lam


# skeleton points and strata


@dataclass(frozen=True)
class SkeletonPoint:
    radii: tuple[Fraction, ...]
    angles: tuple[Fraction | None, ...]  # turns in [0, 1); None where the radius is 0

    def __post_init__(self) -> None:
        radii = tuple(to_fraction(r) for r in self.radii)
        if len(self.angles) != len(radii):
            raise ValueError("radii and angles differ in length")
        angles = []
        for r, t in zip(radii, self.angles):
            if r < 0:
                raise ValueError("radii must be nonnegative")
            if r == 0:
                angles.append(None)
            else:
                t = Fraction(0) if t is None else to_fraction(t)
                angles.append(t - (t.numerator // t.denominator))
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "angles", tuple(angles))

    @property
    def n(self) -> int:
        return len(self.radii)

    @classmethod
    def real(cls, radii: Sequence) -> "SkeletonPoint":
        return cls(tuple(to_fraction(r) for r in radii), tuple(Fraction(0) for _ in radii))

    def minimal_set(self) -> frozenset:
        m = min(self.radii)
        return frozenset(a for a, r in enumerate(self.radii) if r == m)

    def scaled(self, c) -> "SkeletonPoint":
        c = to_fraction(c)
        if c <= 0:
            raise ValueError("scaling must be positive")
        return SkeletonPoint(tuple(c * r for r in self.radii), self.angles)

    def to_json(self) -> dict:
        return {"radii": [str(r) for r in self.radii],
                "angles_turns": [None if t is None else str(t) for t in self.angles]}

    @classmethod
    def from_json(cls, data: dict) -> "SkeletonPoint":
        radii = tuple(to_fraction(r) for r in data["radii"])
        angles = data.get("angles_turns") or [None] * len(radii)
        return cls(radii, tuple(None if t is None else to_fraction(t) for t in angles))


ZERO_FIBER = "zero-fiber"
OPEN = "open"
OFF = "not-on-skeleton"


@dataclass(frozen=True)
class StratumDescriptor:
    kind: str
    subset: frozenset
    codimension: int | None
    theta: Fraction | None = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "subset": sorted(a + 1 for a in self.subset),
                "codimension": self.codimension, "theta_turns": None if self.theta is None else str(self.theta)}


def classify_point(p: SkeletonPoint, thetas: Iterable = (0,)) -> StratumDescriptor:
    n = p.n
    im = p.minimal_set()
    if any(p.angles[b] != 0 for b in range(n) if b not in im and p.radii[b] > 0):
        return StratumDescriptor(OFF, im, None)
    if min(p.radii) == 0:
        return StratumDescriptor(ZERO_FIBER, im, n + len(im))
    total = sum(p.angles[a] for a in im)
    for th in thetas:
        th = to_fraction(th)
        if (total - th).denominator == 1:
            return StratumDescriptor(OPEN, im, n, th - (th.numerator // th.denominator))
    return StratumDescriptor(OFF, im, None)


def stratum_real_dimension(kind: str, n: int, subset_size: int) -> int:
    """Free real parameters of a stratum: radii plus angles left after the equations."""
    if kind == ZERO_FIBER:
        return n - subset_size  # nonzero radii; their angles are pinned to 0
    if kind == OPEN:
        return (1 + n - subset_size) + (subset_size - 1)  # common r_m, other radii; angles on J with one sum
    raise ValueError(kind)


def enumerate_strata(n: int) -> list[tuple[StratumDescriptor, SkeletonPoint, int]]:
    """One representative per stratum with its classification and 2n - (parameter count)."""
    out = []
    for size in range(1, n + 1):
        for j in combinations(range(n), size):
            radii = [Fraction(0) if a in j else Fraction(a + 2) for a in range(n)]
            p0 = SkeletonPoint.real(radii)
            out.append((classify_point(p0), p0, 2 * n - stratum_real_dimension(ZERO_FIBER, n, size)))
            radii = [Fraction(1) if a in j else Fraction(a + 2) for a in range(n)]
            angles = [Fraction(0)] * n
            angles[j[0]] = Fraction(1, 3) if size > 1 else Fraction(0)
            if size > 1:
                angles[j[1]] = Fraction(2, 3)
            p1 = SkeletonPoint(tuple(radii), tuple(angles))
            out.append((classify_point(p1, [0]), p1, 2 * n - stratum_real_dimension(OPEN, n, size)))
    return out


# h_0, g, w


def h0_map(fan: FanData, radii: Sequence) -> Vec:
    r = [to_fraction(x) for x in radii]
    if len(r) != fan.n or any(x < 0 for x in r):
        raise ValueError("need n nonnegative radii")
    if min(r) != 0:
        raise ValueError("not a point of the zero fiber: all radii are positive")
    return fan.combination([-x for x in r])


def lifted_angles(p: SkeletonPoint, tau: Fraction) -> tuple[Fraction, ...]:
    """tau_a in [0, 1) when tau >= 0 and in (-1, 0] when tau < 0 (turns)."""
    out = []
    for t in p.angles:
        t = Fraction(0) if t is None else t
        out.append(t - 1 if tau < 0 and t != 0 else t)
    return tuple(out)


def section_violation(p: SkeletonPoint, tau) -> str | None:
    """First violated equation of P(tau), or None."""
    tau = to_fraction(tau)
    if not -1 < tau < 1:
        return "tau must lie in (-1, 1) turns"
    im = p.minimal_set()
    for b in range(p.n):
        if b not in im and p.radii[b] > 0 and p.angles[b] != 0:
            return f"theta_{b + 1} = 0 fails for an index outside the minimal set"
    if min(p.radii) == 0:
        return None
    if sum(lifted_angles(p, tau)) != tau:
        return "sum of lifted angles differs from tau"
    return None


def g_map(fan: FanData, p: SkeletonPoint, tau, literal: bool = False) -> Vec:
    """sum_a (r tau_a - r_a) ebar_a with r = r_1...r_n.

    By default tau_a enters as sign(tau) tau_a, which keeps the map injective
    for negative tau; literal=True uses tau_a as is.
    """
    tau = to_fraction(tau)
    bad = section_violation(p, tau)
    if bad:
        raise ValueError(bad)
    if min(p.radii) == 0:
        return h0_map(fan, p.radii)
    r = Fraction(1)
    for x in p.radii:
        r *= x
    s = 1 if literal else (1 if tau >= 0 else -1)
    ta = lifted_angles(p, tau)
    return fan.combination([r * s * ta[a] - p.radii[a] for a in range(p.n)])


def w_map(p: SkeletonPoint) -> Fraction:
    r = Fraction(1)
    for x in p.radii:
        r *= x
    return r


def h_map(fan: FanData, p: SkeletonPoint, tau) -> tuple[Vec, Fraction]:
    return g_map(fan, p, tau), w_map(p)


# exact inverse of h


def _pmul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _peval(a: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _preduce(a: list[Fraction], f: Sequence[Fraction]) -> list[Fraction]:
    """Remainder of a modulo the monic polynomial f."""
    a = list(a)
    d = len(f) - 1
    while len(a) > d:
        c = a.pop()
        if c:
            for i in range(d):
                a[len(a) - d + i] -= c * f[i]
    while a and a[-1] == 0:
        a.pop()
    return a


@dataclass(frozen=True)
class PositiveRoot:
    """The unique positive root of a monic polynomial (coefficients low to high), with a rational bracket."""

    poly: tuple[Fraction, ...]
    lo: Fraction
    hi: Fraction

    def rational(self, max_den: int = 10**6) -> Fraction | None:
        """The root when it is a rational with denominator at most max_den, else None."""
        if self.lo == self.hi:
            return self.lo
        fine = self.refine(120)
        cand = ((fine.lo + fine.hi) / 2).limit_denominator(max_den)
        return cand if self.is_root(cand) else None

    def refine(self, steps: int = 40) -> "PositiveRoot":
        lo, hi = self.lo, self.hi
        for _ in range(steps):
            if lo == hi:
                break
            mid = (lo + hi) / 2
            v = _peval(self.poly, mid)
            if v == 0:
                lo = hi = mid
            elif v < 0:
                lo = mid
            else:
                hi = mid
        return PositiveRoot(self.poly, lo, hi)

    def is_root(self, x: Fraction) -> bool:
        return x > 0 and _peval(self.poly, x) == 0

    def reduce(self, a: list[Fraction]) -> list[Fraction]:
        return _preduce(a, self.poly)


def _positive_root(poly: list[Fraction]) -> PositiveRoot:
    # poly(0) <= 0 and poly strictly increasing on (0, inf) by construction
    hi = Fraction(1)
    while _peval(poly, hi) < 0:
        hi *= 2
    lo = Fraction(0)
    if _peval(poly, hi) == 0:
        lo = hi
    elif _peval(poly, lo) == 0:
        hi = lo
    return PositiveRoot(tuple(poly), lo, hi)


@dataclass(frozen=True)
class SectionPreimage:
    """Preimage of (c, w) under h: either a zero-fiber point (w = 0) or

    r_a = rho for a in J, r_b = rho - u_b for b not in J, tau_a = sign(tau) u_a / w on J,
    where rho is the positive root of rho^{|J|} prod_{b not in J} (rho - u_b) = w.
    """

    subset: frozenset
    u: Vec
    w: Fraction
    tau: Fraction
    root: PositiveRoot | None
    zero_fiber_radii: Vec | None = None

    def angles(self) -> tuple[Fraction, ...]:
        s = 1 if self.tau >= 0 else -1
        return tuple(s * self.u[a] / self.w if a in self.subset else Fraction(0) for a in range(len(self.u)))

    def point(self) -> SkeletonPoint | None:
        """The preimage as a SkeletonPoint when all radii are rational."""
        if self.zero_fiber_radii is not None:
            return SkeletonPoint.real(self.zero_fiber_radii)
        rho = self.root.rational()
        if rho is None:
            return None
        radii = tuple(rho if a in self.subset else rho - self.u[a] for a in range(len(self.u)))
        angs = tuple(t + 1 if t < 0 else t for t in self.angles())
        return SkeletonPoint(radii, angs)


def _water_level(u: Sequence[Fraction], target: Fraction) -> Fraction:
    """The t with sum_a max(u_a + t, 0) = target (target >= 0), taking the minimal such t when target = 0."""
    vals = sorted(u, reverse=True)
    if target == 0:
        return -vals[0]
    acc = Fraction(0)
    for k, v in enumerate(vals, start=1):
        acc += v
        t = (target - acc) / k
        nxt = vals[k] if k < len(vals) else None
        if v + t > 0 and (nxt is None or nxt + t <= 0):
            return t
    raise AssertionError("water level not found")


def h_inverse(fan: FanData, c: Sequence, w, tau) -> SectionPreimage:
    tau, w = to_fraction(tau), to_fraction(w)
    if w < 0:
        raise ValueError("w must be nonnegative")
    u0 = fan.lift(c)
    if w == 0:
        m = max(u0)
        radii = tuple(m - x for x in u0)
        return SectionPreimage(frozenset(a for a, x in enumerate(radii) if x == 0), tuple(-x for x in radii),
                               w, tau, None, radii)
    t = _water_level(u0, w * abs(tau))
    u = tuple(x + t for x in u0)
    if tau == 0:
        j = frozenset(a for a, x in enumerate(u) if x == 0)
    else:
        j = frozenset(a for a, x in enumerate(u) if x >= 0)
    poly = [Fraction(1)]
    for a in range(fan.n):
        poly = _pmul(poly, [Fraction(0), Fraction(1)] if a in j else [-u[a], Fraction(1)])
    poly[0] -= w
    return SectionPreimage(j, u, w, tau, _positive_root(poly))


def h_forward_check(fan: FanData, pre: SectionPreimage, c: Sequence, w) -> str | None:
    """Apply g x w to a preimage exactly in Q[x]/(F) and compare with (c, w); returns a failure or None."""
    c = tuple(to_fraction(x) for x in c)
    w = to_fraction(w)
    if pre.zero_fiber_radii is not None:
        if min(pre.zero_fiber_radii) != 0 or any(x < 0 for x in pre.zero_fiber_radii):
            return "zero-fiber radii invalid"
        return None if h0_map(fan, pre.zero_fiber_radii) == c else "h0 round trip differs"
    n = fan.n
    root = pre.root
    if _peval(root.poly, Fraction(0)) >= 0:
        return "no positive root"
    for b in range(n):
        if b not in pre.subset and pre.u[b] >= 0:
            return "radius outside the minimal set is not larger"
    ang = pre.angles()
    s = 1 if pre.tau >= 0 else -1
    if any(not 0 <= s * x < 1 for x in ang) or sum(ang) != pre.tau:
        return "angles off the simplex"
    # radii as elements of Q[x]/(F): x or x - u_b
    radii = [[Fraction(0), Fraction(1)] if a in pre.subset else [-pre.u[a], Fraction(1)] for a in range(n)]
    prod = [Fraction(1)]
    for r in radii:
        prod = root.reduce(_pmul(prod, r))
    if prod != ([w] if w else []):
        return "product of radii differs from w"
    comps = []
    for a in range(n):
        val = [s * w * ang[a] - radii[a][0], -radii[a][1]]
        comps.append(val)
    k = fan.eliminate
    g = []
    for a in range(n):
        if a == k:
            continue
        diff = [x - y for x, y in zip(comps[a], comps[k])]
        if diff[1] != 0:
            return "g is not rational"
        g.append(diff[0])
    return None if tuple(g) == c else "g round trip differs"


def _rand_frac(rng: random.Random, lo: int, hi: int, den: int = 6) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def sample_section_point(n: int, tau: Fraction, rng: random.Random) -> SkeletonPoint:
    """A random rational point of P(tau) with all radii positive."""
    size = rng.randint(1, n)
    j = rng.sample(range(n), size)
    rm = _rand_frac(rng, 1, 4)
    radii = [rm if a in j else rm + _rand_frac(rng, 1, 3) for a in range(n)]
    weights = [Fraction(rng.randint(0, 5)) for _ in j]
    if sum(weights) == 0:
        weights[0] = Fraction(1)
    tot = sum(weights)
    angles = [Fraction(0)] * n
    for a, wgt in zip(j, weights):
        t = tau * wgt / tot
        angles[a] = t + 1 if t < 0 else t
    return SkeletonPoint(tuple(radii), tuple(angles))


@dataclass
class BijectivityReport:
    n: int
    tau: Fraction
    samples: int
    ok: bool = True
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "tau_turns": str(self.tau), "samples": self.samples, "ok": self.ok,
                "counterexample": self.counterexample}


def verify_section_bijectivity(n: int, tau, samples: int = 1000, seed: int = 0) -> BijectivityReport:
    """Round-trips h^{-1} o h on sampled points of P(tau) and h o h^{-1} on sampled (c, w)."""
    tau = to_fraction(tau)
    if not -1 < tau < 1:
        raise ValueError("tau must lie in (-1, 1) turns")
    fan = build_projective_fan(n)
    rng = random.Random(seed)
    rep = BijectivityReport(n, tau, samples)
    for i in range(samples):
        if i % 2 == 0:
            p = sample_section_point(n, tau, rng)
            c, w = h_map(fan, p, tau)
            pre = h_inverse(fan, c, w, tau)
            back = None
            if pre.subset == p.minimal_set():
                rho = min(p.radii)
                if pre.root.is_root(rho) and all(
                        (rho if a in pre.subset else rho - pre.u[a]) == p.radii[a] for a in range(n)):
                    back = SkeletonPoint(p.radii, tuple(t + 1 if t < 0 else t for t in pre.angles()))
            if back != p:
                rep.ok = False
                rep.counterexample = {"direction": "point", "point": p.to_json(),
                                      "image": [str(x) for x in c] + [str(w)]}
                return rep
        else:
            c = tuple(_rand_frac(rng, -3, 3) for _ in range(n - 1))
            w = Fraction(0) if rng.random() < 0.1 else _rand_frac(rng, 0, 5) or Fraction(1)
            pre = h_inverse(fan, c, w, tau)
            bad = h_forward_check(fan, pre, c, w)
            if bad:
                rep.ok = False
                rep.counterexample = {"direction": "image", "c": [str(x) for x in c], "w": str(w),
                                      "failure": bad}
                return rep
    return rep


def simplex_support(n: int, tau) -> list[Vec]:
    """Vertices tau * e_a of the simplex sum tau_a = tau; tau = 0 gives the identity point."""
    tau = to_fraction(tau)
    if tau == 0:
        return [tuple(Fraction(0) for _ in range(n))]
    return [tuple(tau if b == a else Fraction(0) for b in range(n)) for a in range(n)]


def cone_incidence(fan: FanData) -> set[tuple[frozenset, frozenset]]:
    """Pairs (J, J') where sigma_J is a face of sigma_J', decided from generator vectors."""
    out = set()
    for j, gens in fan.cones.items():
        vecs = {fan.rays[a] for a in gens}
        for j2, gens2 in fan.cones.items():
            if vecs <= {fan.rays[a] for a in gens2}:
                out.add((j, j2))
    return out


def cone_membership_oracle(fan: FanData, subset: frozenset, x: Sequence) -> bool:
    """x lies in the relatively open cone sigma_J: solve for ray coefficients and check positivity."""
    gens = fan.cones[frozenset(subset)]
    x = tuple(to_fraction(v) for v in x)
    if not gens:
        return all(v == 0 for v in x)
    a = RatMatrix.from_columns([fan.rays[g] for g in gens], fan.dim)
    sol = solve(a, x)
    return sol is not None and all(v > 0 for v in sol)


def fan_json(fan: FanData) -> dict:
    return {
        "n": fan.n,
        "eliminated_index": fan.eliminate + 1,
        "rays": [list(r) for r in fan.rays],
        "cones": [{"subset": sorted(a + 1 for a in j), "generators": [a + 1 for a in g],
                   "dimension": len(g)} for j, g in sorted(fan.cones.items(), key=lambda kv: (-len(kv[0]), sorted(kv[0])))],
    }


__all__ = [
    "BijectivityReport", "ConeData", "FanData", "OFF", "OPEN", "PositiveRoot", "SectionPreimage", "SkeletonPoint",
    "StratumDescriptor", "ZERO_FIBER", "build_projective_fan", "classify_point", "cone_dimension_check",
    "cone_for_subset", "cone_incidence", "cone_membership_oracle", "enumerate_strata", "fan_json", "g_map",
    "h0_map", "h_forward_check", "h_inverse", "h_map", "lifted_angles", "locate_cone", "sample_section_point",
    "section_violation", "simplex_support", "stratum_real_dimension", "verify_section_bijectivity", "w_map",
]
