"""The acceptance battery at a given dimension, with brute-force oracles."""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import product
from typing import Any

from .exactalg import RatMatrix, det, is_acyclic, kernel_basis, rank
from .lbcx import LBComplex, expected_euler, rgamma, tensor
from .lbcx.poly import HomogPoly
from .cohp import compositions


def brute_force_h(m: int, d: int) -> dict[int, int]:
    """h^i(P^m, O(d)) by enumerating Laurent monomials of degree d.

    H^0 counts exponent vectors with all entries >= 0, H^m those with all
    entries <= -1; no other degree contributes. The last exponent is fixed
    by the degree, the others run over the only ranges that can contribute.
    """
    if m == 0:
        return {0: 1}  # a point: every line bundle is trivial
    h0 = sum(1 for e in product(range(0, d + 1), repeat=m) if d - sum(e) >= 0) if d >= 0 else 0
    hm = 0
    if d <= -m - 1:
        hm = sum(1 for e in product(range(d + m, 0), repeat=m) if d - sum(e) <= -1)
    out = {}
    if h0:
        out[0] = h0
    if hm:
        out[m] = hm
    return out


def _random_poly(rng: random.Random, nv: int, deg: int) -> HomogPoly:
    if deg < 0:
        return HomogPoly(nv)
    mons = compositions(deg, nv)
    terms = {}
    for e in rng.sample(mons, min(len(mons), rng.randint(1, 3))):
        c = rng.randint(-3, 3)
        if c:
            terms[e] = Fraction(c)
    return HomogPoly(nv, terms)


def random_two_term(rng: random.Random, m: int, lo: int = -3, hi: int = 3) -> LBComplex:
    """O(a_1) + ... -> O(b_1) + ... in degrees -1, 0 with random polynomial entries."""
    nv = m + 1
    src = tuple(rng.randint(lo, hi) for _ in range(rng.randint(1, 2)))
    tgt = tuple(rng.randint(lo, hi) for _ in range(rng.randint(1, 2)))
    d = tuple(tuple(_random_poly(rng, nv, b - a) for a in src) for b in tgt)
    return LBComplex(m, -1, 0, {-1: src, 0: tgt}, {-1: d})


def random_lbcomplex(rng: random.Random, m: int) -> LBComplex:
    """A random complex of length at most 3 with twists in [-6, 6]."""
    kind = rng.randint(0, 2)
    if kind == 0:
        return LBComplex.sum_of_lines(m, [rng.randint(-6, 6) for _ in range(rng.randint(1, 2))], rng.randint(-1, 1))
    if kind == 1:
        return random_two_term(rng, m, -6, 6)
    return tensor(random_two_term(rng, m), random_two_term(rng, m))


def quiver_interval_ext(r: int, v: tuple[int, int], w: tuple[int, int]) -> dict[int, int]:
    """Ext between interval modules of the quiver r-1 -> ... -> 2 -> 1 by direct linear algebra."""
    verts = range(1, r)

    def dim(iv, j):
        return 1 if iv[0] <= j <= iv[1] else 0

    def arrow(iv, j):  # map at vertex j+1 -> j
        return 1 if iv[0] <= j and j + 1 <= iv[1] else 0

    cols = [(j,) for j in verts if dim(v, j) and dim(w, j)]
    rows = [(j,) for j in range(1, r - 1) if dim(v, j + 1) and dim(w, j)]
    if not cols:
        return {1: len(rows)} if rows else {}
    entries = []
    for (j,) in rows:
        row = []
        for (c,) in cols:
            x = 0
            if c == j + 1:
                x += arrow(w, j)
            if c == j:
                x -= arrow(v, j)
            row.append(x)
        entries.append(row)
    rk = rank(RatMatrix.from_rows(entries, len(cols))) if rows else 0
    out = {}
    if len(cols) - rk:
        out[0] = len(cols) - rk
    if len(rows) - rk:
        out[1] = len(rows) - rk
    return out


def _timed(fn) -> tuple[bool, dict]:
    t0 = time.perf_counter()
    ok, info = fn()
    info["seconds"] = round(time.perf_counter() - t0, 3)
    return ok, info


def check_spherical_suite(n: int) -> tuple[bool, dict]:
    from .hyper import check_spherical

    rep = check_spherical(n, witnesses=False)
    return rep.passed, {"verdicts": rep.verdicts}


def check_monad_suite(n: int) -> tuple[bool, dict]:
    from .hyper import HyperplaneData, compare_monad, generators_x, monad, stalk_at_coordinate_point

    hd = HyperplaneData(n)
    info, ok = {}, True
    for g in generators_x(n):
        m = monad(g, hd)
        stalks = all(is_acyclic(stalk_at_coordinate_point(m, a)) for a in range(1, n + 1))
        cmp_ok = compare_monad(g, hd)
        info[f"O({g.term(0)[0]})"] = {"comparison": cmp_ok, "stalks_acyclic": stalks}
        ok = ok and cmp_ok and stalks
    return ok, info


def check_ledger_suite(n: int) -> tuple[bool, dict]:
    from .schober import ledger_compose, ledger_entry, ledger_hyper_crosscheck, ledger_to_coherent

    half = ledger_entry(Fraction(1, 2))
    full = ledger_compose(half, half)
    desc = ledger_to_coherent(ledger_entry(1))
    cross = ledger_hyper_crosscheck(n)
    ok = full.tau == 1 and full.shift == 2 and (desc.twist, desc.shift) == (-1, 2) and all(cross.values())
    return ok, {"pi*pi": full.to_json(), "coherent(2pi)": [desc.twist, desc.shift], "crosscheck": cross}


def check_cohomology_suite(m_max: int) -> tuple[bool, dict]:
    from .cohp import h_dim
    from .lbcx import koszul_complex

    bad = []
    for m in range(m_max + 1):
        for d in range(-8, 9):
            table = {i: h_dim(m, i, d) for i in range(m + 1) if h_dim(m, i, d)}
            if table != brute_force_h(m, d):
                bad.append(f"cohp m={m} d={d}")
            res = rgamma(LBComplex.line(m, d))
            if res.dims != table or not set(res.dims) <= {0, m}:
                bad.append(f"rgamma m={m} d={d}")
    for m in range(min(m_max, 3) + 1):
        k = koszul_complex(m)
        if any(rgamma(k, j).dims for j in range(m + 1)):
            bad.append(f"koszul m={m}")
    return not bad, {"failures": bad}


def check_stabilization_suite(count: int, seed: int) -> tuple[bool, dict]:
    rng = random.Random(seed)
    bad, floors = [], []
    for i in range(count):
        m = rng.randint(1, 3)
        c = random_lbcomplex(rng, m)
        try:
            res = rgamma(c)
        except Exception as exc:  # the diagnostic itself is a failure here
            bad.append(f"#{i}: {exc}")
            continue
        floors.append(res.floor)
        if res.euler != expected_euler(c):
            bad.append(f"#{i}: Euler certificate")
    return not bad, {"failures": bad, "max_floor": max(floors, default=0)}


def _rand_matrix(rng: random.Random, rows: int, cols: int) -> RatMatrix:
    if not rows or not cols:
        return RatMatrix.zeros(rows, cols)
    return RatMatrix.from_rows([[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(cols)]
                                for _ in range(rows)], cols)


def random_perverse_datum(rng: random.Random):
    from .schober import PerverseDiskDatum

    a, b = rng.randint(0, 3), rng.randint(0, 3)
    return PerverseDiskDatum(_rand_matrix(rng, b, a), _rand_matrix(rng, a, b))


def check_perverse_suite(count: int, seed: int) -> tuple[bool, dict]:
    from .schober import check_perverse, has_no_origin_sections, intertwines

    rng = random.Random(seed)
    bad = []
    for i in range(count):
        d = random_perverse_datum(rng)
        m_phi = RatMatrix.identity(d.dim_phi) - d.q @ d.p
        m_psi = RatMatrix.identity(d.dim_psi) - d.p @ d.q
        expect = det(m_phi) != 0 and det(m_psi) != 0
        if check_perverse(d).ok != expect:
            bad.append(f"#{i}: perversity")
        if not intertwines(d):
            bad.append(f"#{i}: intertwining")
        if has_no_origin_sections(d) != (not kernel_basis(d.p)):
            bad.append(f"#{i}: origin sections")
    return not bad, {"failures": bad}


def check_degeneration_suite(r_max: int) -> tuple[bool, dict]:
    from .schober import diagram_hom_dims, interval_diagram

    bad, count = [], 0
    for r in range(2, r_max + 1):
        ivs = [(a, b) for a in range(1, r) for b in range(a, r)]
        for v in ivs:
            for w in ivs:
                count += 1
                got = diagram_hom_dims(interval_diagram(r, *v), interval_diagram(r, *w))
                if got != quiver_interval_ext(r, v, w):
                    bad.append(f"r={r} {v}->{w}: {got}")
    return not bad, {"pairs": count, "failures": bad}


def check_ccc_suite() -> tuple[bool, dict]:
    from .cellccc import ccc_compare, local_system_check

    rep = ccc_compare()
    locs = {str(lam): local_system_check(lam, [1, 2, 5]).ok for lam in (1, 2, 5)}
    return rep.ok and all(locs.values()), {"mismatches": rep.mismatches, "local_systems": locs}


def check_skeleton_suite(n: int, samples: int, seed: int) -> tuple[bool, dict]:
    from .fanskeleton import (build_projective_fan, classify_point, cone_membership_oracle, enumerate_strata,
                              h0_map, verify_section_bijectivity)

    rng = random.Random(seed)
    bad = []
    for k in range(1, min(n, 4) + 1):
        for desc, pt, codim in enumerate_strata(k):
            if desc.codimension != codim:
                bad.append(f"codim n={k} {sorted(desc.subset)}")
            if classify_point(pt.scaled(Fraction(5, 3)), [0]) != classify_point(pt, [0]):
                bad.append(f"conic n={k}")
    nn = max(2, min(n, 4))
    fan = build_projective_fan(nn)
    for _ in range(samples):
        j = frozenset(rng.sample(range(nn), rng.randint(1, nn)))
        radii = [Fraction(0) if a in j else Fraction(rng.randint(1, 30), rng.randint(1, 5)) for a in range(nn)]
        x = h0_map(fan, radii)
        if not cone_membership_oracle(fan, j, tuple(-v for v in x)):
            bad.append(f"h0 {radii}")
    for nb in (2, 3):
        for tau in (0, Fraction(1, 4), Fraction(-1, 4), Fraction(1, 2), Fraction(-1, 2)):
            r = verify_section_bijectivity(nb, tau, samples, seed)
            if not r.ok:
                bad.append(f"section n={nb} tau={tau}: {r.counterexample}")
    return not bad, {"failures": bad}


def run_suite(n: int, seed: int = 0) -> dict[str, tuple[bool, dict[str, Any]]]:
    if n < 2:
        raise ValueError("the suite needs n >= 2")
    out = {}
    out["1 spherical functor"] = _timed(lambda: check_spherical_suite(n))
    out["2 monad"] = _timed(lambda: check_monad_suite(n))
    out["3 monodromy ledger"] = _timed(lambda: check_ledger_suite(n))
    out["4 cohomology engine"] = _timed(lambda: check_cohomology_suite(min(n - 1, 4)))
    out["5 Cech stabilization"] = _timed(lambda: check_stabilization_suite(100, seed))
    out["6 perverse disk quiver"] = _timed(lambda: check_perverse_suite(1000, seed))
    out["7 M(r) degeneration"] = _timed(lambda: check_degeneration_suite(5))
    out["8 CCC n=2"] = _timed(check_ccc_suite)
    out["9 skeleton geometry"] = _timed(lambda: check_skeleton_suite(n, 1000, seed))
    return out
