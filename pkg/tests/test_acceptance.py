"""Acceptance battery. Each test prints one PASS/FAIL line; the lines are
repeated in the terminal summary.

Oracles are independent of the code under test: monomial enumeration for
line-bundle cohomology, sympy determinants and nullspaces for the disk
quiver and the A-type quiver, and closed-form values on P^1.
"""

import random
import time
from fractions import Fraction
from itertools import product

import sympy

from acceptance_log import record
from schoberkit import cli
from schoberkit.cellccc import ccc_compare, convolve, build_generator, cell_hom_dims, local_system_check
from schoberkit.cohp import h_dim
from schoberkit.fanskeleton import (
    ZERO_FIBER,
    SkeletonPoint,
    build_projective_fan,
    classify_point,
    cone_membership_oracle,
    enumerate_strata,
    h0_map,
    verify_section_bijectivity,
)
from schoberkit.hyper import (
    HyperplaneData,
    check_spherical,
    compare_monad,
    generators_x,
    monad,
    reverify,
    stalk_at_coordinate_point,
    twist_comparison,
)
from schoberkit.exactalg import is_acyclic
from schoberkit.lbcx import LBComplex, expected_euler, is_equivalence, koszul_complex, rgamma, rgamma_at_floor
from schoberkit.schober import (
    check_perverse,
    diagram_hom_dims,
    has_no_origin_sections,
    intertwines,
    ledger_compose,
    ledger_entry,
    ledger_hyper_crosscheck,
    ledger_to_coherent,
    interval_diagram,
)
from schoberkit.suite import random_lbcomplex, random_perverse_datum


def _sympy(m):
    return sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for r in m.entries for x in r])


def enumerate_h(m: int, d: int) -> dict[int, int]:
    """Laurent monomials x^e of degree d on P^m: H^0 from e >= 0, H^m from e <= -1."""
    if m == 0:
        return {0: 1}
    out = {}
    h0 = sum(1 for e in product(range(0, max(d, -1) + 1), repeat=m + 1) if sum(e) == d)
    hm = sum(1 for e in product(range(min(d + m, -1), 0), repeat=m + 1) if sum(e) == d)
    if h0:
        out[0] = h0
    if hm:
        out[m] = hm
    return out


def test_criterion_1_spherical_functor():
    ok, detail = True, []
    for n in (2, 3, 4):
        t0 = time.perf_counter()
        rep = check_spherical(n)
        code = cli.main(["hyper", "spherical-check", "--n", str(n), "--json"])
        secs = time.perf_counter() - t0
        needed = ["SF1", "SF2", "SF3", "SF4", "T_Psi_r = (x)O(1)", "T_Phi_r = (x)O_Y(1)[-2]", "T_Psi_l = (x)O(-1)"]
        good = (rep.passed and all(rep.verdicts[k] for k in needed) and reverify(rep) and code == 0
                and len(rep.details["SF1"]) == n)
        if n == 4:
            good = good and secs < 120
        ok = ok and good
        detail.append(f"n={n} {secs:.1f}s")
    record(1, "spherical functor suite", ok, ", ".join(detail))
    assert ok


def test_criterion_2_monad():
    ok = True
    for n in (2, 3, 4):
        hd = HyperplaneData(n)
        for g in generators_x(n):
            m = monad(g, hd)
            ok = ok and compare_monad(g, hd)
            ok = ok and all(is_acyclic(stalk_at_coordinate_point(m, a)) for a in range(1, n + 1))
    record(2, "monad equals tensoring with the Koszul cone", ok)
    assert ok


def test_criterion_3_monodromy_ledger():
    half = ledger_entry(Fraction(1, 2))
    full = ledger_compose(half, half)
    desc = ledger_to_coherent(ledger_entry(1))
    ok = full.tau == 1 and full.shift == 2 and (desc.twist, desc.shift) == (-1, 2)
    for n in (2, 3, 4):
        ok = ok and all(ledger_hyper_crosscheck(n).values())
        hd = HyperplaneData(n)
        ok = ok and all(is_equivalence(twist_comparison("TPsi_l", g, hd)) for g in generators_x(n))
    record(3, "monodromy bookkeeping", ok, f"A_pi*A_pi shift {full.shift}, coherent {desc.twist, desc.shift}")
    assert ok


def test_criterion_4_cohomology_engine():
    t0 = time.perf_counter()
    bad = []
    for m in range(5):
        for d in range(-8, 9):
            table = {i: h_dim(m, i, d) for i in range(m + 1) if h_dim(m, i, d)}
            if table != enumerate_h(m, d):
                bad.append(("cohp", m, d))
            res = rgamma(LBComplex.line(m, d))
            if res.dims != table or not set(res.dims) <= {0, m}:
                bad.append(("rgamma", m, d))
    for m in range(4):
        if rgamma(koszul_complex(m)).dims:
            bad.append(("koszul", m))
    secs = time.perf_counter() - t0
    ok = not bad and secs < 60
    record(4, "cohomology engine vs monomial enumeration", ok, f"{secs:.1f}s, {len(bad)} mismatches")
    assert ok, bad


def test_criterion_5_cech_stabilization():
    rng = random.Random(5)
    bad = []
    for i in range(100):
        c = random_lbcomplex(rng, rng.randint(1, 3))
        assert c.hi - c.lo <= 2
        res = rgamma(c)
        later = rgamma_at_floor(c, 0, res.floor + 1)
        if res.euler != expected_euler(c) or later.dims != res.dims:
            bad.append(i)
    ok = not bad
    record(5, "Cech stabilization with Euler certificate", ok, f"100 complexes, {len(bad)} failures")
    assert ok, bad


def test_criterion_6_perverse_disk_quiver():
    rng = random.Random(6)
    data = [random_perverse_datum(rng) for _ in range(1000)]
    t0 = time.perf_counter()
    verdicts = [(check_perverse(d).ok, intertwines(d), has_no_origin_sections(d)) for d in data]
    secs = time.perf_counter() - t0
    bad = 0
    for d, (perv, inter, noorig) in zip(data, verdicts):
        p, q = _sympy(d.p), _sympy(d.q)
        m_phi = sympy.eye(d.dim_phi) - q * p
        m_psi = sympy.eye(d.dim_psi) - p * q
        expect = m_phi.det() != 0 and m_psi.det() != 0
        if perv != expect or not inter or noorig != (len(p.nullspace()) == 0):
            bad += 1
    ok = not bad and secs < 10
    record(6, "perverse disk quiver vs sympy", ok, f"1000 data in {secs:.2f}s, {bad} mismatches")
    assert ok


def a_quiver_ext(r: int, v: tuple[int, int], w: tuple[int, int]) -> dict[int, int]:
    """Hom from a sympy nullspace, Ext^1 from the Euler form, on r-1 -> ... -> 1."""
    verts = list(range(1, r))
    dv = {j: int(v[0] <= j <= v[1]) for j in verts}
    dw = {j: int(w[0] <= j <= w[1]) for j in verts}
    unknowns = [j for j in verts if dv[j] and dw[j]]
    eqs = []
    for j in verts[:-1]:  # arrow j+1 -> j
        if not (dv[j + 1] and dw[j]):
            continue
        row = [0] * len(unknowns)
        for k, u in enumerate(unknowns):
            if u == j + 1 and dw[j + 1]:
                row[k] += 1  # w-arrow after phi_{j+1}
            if u == j and dv[j + 1]:
                row[k] -= 1  # phi_j after v-arrow
        eqs.append(row)
    if unknowns:
        hom = len(sympy.Matrix(eqs).nullspace()) if eqs else len(unknowns)
    else:
        hom = 0
    euler = sum(dv[j] * dw[j] for j in verts) - sum(dv[j + 1] * dw[j] for j in verts[:-1])
    out = {}
    if hom:
        out[0] = hom
    if hom - euler:
        out[1] = hom - euler
    return out


def test_criterion_7_degeneration():
    bad, count = [], 0
    for r in range(2, 6):
        ivs = [(a, b) for a in range(1, r) for b in range(a, r)]
        for v in ivs:
            for w in ivs:
                count += 1
                got = diagram_hom_dims(interval_diagram(r, *v), interval_diagram(r, *w))
                if got != a_quiver_ext(r, v, w):
                    bad.append((r, v, w, got))
    ok = not bad
    record(7, "M(r) degeneration to A-type quiver", ok, f"{count} pairs, {len(bad)} mismatches")
    assert ok, bad


def test_criterion_8_ccc():
    rep = ccc_compare()
    # closed form on P^1: Ext^i(O(a), O(b)) = h^i(O(b - a))
    closed = {f"{x}->{y}": {i: h_dim(1, i, b - a) for i in (0, 1) if h_dim(1, i, b - a)}
              for x, a in (("unit", 0), ("twist", -1)) for y, b in (("unit", 0), ("twist", -1))}
    tt = convolve(build_generator("twist"), build_generator("twist"))
    square = {name: (cell_hom_dims(build_generator(name), tt), cell_hom_dims(tt, build_generator(name)))
              for name in ("unit", "twist")}
    square_closed = {"unit": ({1: 1}, {0: 3}), "twist": ({}, {0: 2})}
    locs = [local_system_check(lam, [1, 2, 5]).ok for lam in (1, 2, 5)]
    ok = rep.ok and rep.grid_cellular == closed and square == square_closed and all(locs)
    record(8, "coherent-constructible correspondence at n=2", ok, f"mismatches {rep.mismatches}")
    assert ok


def test_criterion_9_skeleton():
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 5):
        for desc, pt, codim in enumerate_strata(n):
            if desc.codimension != codim:
                bad.append(("codim", n, sorted(desc.subset)))
            if desc.kind == ZERO_FIBER and desc.codimension != n + len(desc.subset):
                bad.append(("n+|J|", n, sorted(desc.subset)))
    rng = random.Random(9)
    for n in (2, 3, 4):
        fan = build_projective_fan(n)
        for _ in range(1000):
            j = frozenset(rng.sample(range(n), rng.randint(1, n)))
            radii = [Fraction(0) if a in j else Fraction(rng.randint(1, 40), rng.randint(1, 7)) for a in range(n)]
            x = h0_map(fan, radii)
            if not cone_membership_oracle(fan, j, tuple(-v for v in x)):
                bad.append(("h0", radii))
    for n in (2, 3):
        for tau in (0, Fraction(1, 4), Fraction(-1, 4), Fraction(1, 2), Fraction(-1, 2)):
            rep = verify_section_bijectivity(n, tau, 1000, seed=n)
            if not rep.ok:
                bad.append(("section", n, tau, rep.counterexample))
    for _ in range(200):
        n = rng.randint(1, 4)
        radii = [Fraction(rng.randint(0, 4)) for _ in range(n)]
        angles = [Fraction(rng.randint(0, 5), 6) for _ in range(n)]
        p = SkeletonPoint(tuple(radii), tuple(angles))
        thetas = [0, Fraction(1, 2)]
        c = Fraction(rng.randint(1, 30), rng.randint(1, 30))
        if classify_point(p.scaled(c), thetas) != classify_point(p, thetas):
            bad.append(("conic", p, c))
    secs = time.perf_counter() - t0
    ok = not bad and secs < 60
    record(9, "skeleton and PL geometry", ok, f"{secs:.1f}s, {len(bad)} failures")
    assert ok, bad[:5]
