import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from schoberkit.fanskeleton import (
    OFF,
    OPEN,
    ZERO_FIBER,
    SkeletonPoint,
    build_projective_fan,
    classify_point,
    cone_dimension_check,
    cone_for_subset,
    cone_incidence,
    cone_membership_oracle,
    enumerate_strata,
    fan_json,
    g_map,
    h0_map,
    h_forward_check,
    h_inverse,
    h_map,
    locate_cone,
    sample_section_point,
    section_violation,
    simplex_support,
    verify_section_bijectivity,
    w_map,
)

F = Fraction
small = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def test_fan_of_p2():
    fan = build_projective_fan(3)
    assert len(fan.cones) == 7
    assert fan.rays == ((1, 0), (0, 1), (-1, -1))
    for j in fan.cones:
        assert cone_dimension_check(fan, j)
    assert cone_for_subset(fan, {0}).perp_basis == ()
    assert cone_for_subset(fan, {0, 1, 2}).dim == 0
    data = fan_json(fan)
    assert data["eliminated_index"] == 3 and len(data["cones"]) == 7


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_incidence_independent_of_eliminated_index(n):
    base = cone_incidence(build_projective_fan(n))
    for k in range(n):
        assert cone_incidence(build_projective_fan(n, k)) == base
    # faces of sigma_J are sigma_J' with J' containing J
    assert base == {(j, j2) for j in build_projective_fan(n).cones for j2 in build_projective_fan(n).cones
                    if j2 <= j}


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.just(n), st.lists(small, min_size=n - 1, max_size=n - 1))))
def test_cones_partition_the_space(args):
    n, x = args
    fan = build_projective_fan(n)
    j, lam = locate_cone(fan, x)
    assert min(lam) == 0
    hits = [k for k in fan.cones if cone_membership_oracle(fan, k, x)]
    assert hits == [j]


def test_classify_examples():
    assert classify_point(SkeletonPoint((0, 1, 2), (None, 0, F(1, 2)))).kind == OFF
    z = classify_point(SkeletonPoint.real((0, 0, 3)))
    assert (z.kind, z.subset, z.codimension) == (ZERO_FIBER, frozenset({0, 1}), 5)
    p = SkeletonPoint((1, 1, 2), (F(1, 3), F(2, 3), 0))
    o = classify_point(p, [0])
    assert (o.kind, o.codimension, o.theta) == (OPEN, 3, 0)
    assert classify_point(p, [F(1, 2)]).kind == OFF
    assert classify_point(SkeletonPoint((1, 1), (F(1, 4), F(1, 4))), [F(1, 2)]).theta == F(1, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_strata_codimension(n):
    for desc, pt, codim in enumerate_strata(n):
        assert desc.codimension == codim
        if desc.kind == ZERO_FIBER:
            assert codim == n + len(desc.subset)
        else:
            assert codim == n


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 4), min_size=n, max_size=n),
    st.lists(st.fractions(0, 1, max_denominator=6), min_size=n, max_size=n))),
    st.fractions(min_value=F(1, 50), max_value=50, max_denominator=50))
def test_conic_invariance(pt, c):
    p = SkeletonPoint(tuple(pt[0]), tuple(pt[1]))
    thetas = [0, F(1, 3), F(1, 2)]
    assert classify_point(p.scaled(c), thetas) == classify_point(p, thetas)


def test_point_json_and_validation():
    p = SkeletonPoint((0, 2), (F(1, 2), F(5, 4)))
    assert p.angles == (None, F(1, 4))
    assert SkeletonPoint.from_json(p.to_json()) == p
    with pytest.raises(ValueError):
        SkeletonPoint((-1, 1), (0, 0))
    with pytest.raises(ValueError):
        p.scaled(0)


def test_h0_lands_in_its_cone():
    fan = build_projective_fan(3)
    x = h0_map(fan, (0, 2, 3))
    assert x == (3, 1)  # -(2 ebar_2 + 3 ebar_3) with ebar_3 = (-1, -1)
    assert locate_cone(fan, tuple(-v for v in x))[0] == frozenset({0})
    with pytest.raises(ValueError):
        h0_map(fan, (1, 2, 3))


def test_section_violations():
    p = SkeletonPoint((1, 2), (F(1, 4), F(1, 8)))
    assert "outside the minimal set" in section_violation(p, F(1, 4))
    q = SkeletonPoint((1, 2), (F(1, 4), 0))
    assert section_violation(q, F(1, 4)) is None
    assert "differs from tau" in section_violation(q, F(1, 2))
    assert section_violation(q, 1) is not None
    with pytest.raises(ValueError):
        g_map(build_projective_fan(2), q, F(1, 2))


def test_literal_g_collides_for_negative_tau():
    fan = build_projective_fan(2)
    tau = F(-1, 2)
    b = SkeletonPoint((1, 2), (F(1, 2), 0))
    b2 = SkeletonPoint((2, 1), (0, F(1, 2)))
    assert section_violation(b, tau) is None and section_violation(b2, tau) is None
    assert w_map(b) == w_map(b2) == 2
    assert g_map(fan, b, tau, literal=True) == g_map(fan, b2, tau, literal=True) == (0,)
    assert g_map(fan, b, tau) != g_map(fan, b2, tau)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("tau", [0, F(1, 4), F(-1, 4), F(1, 2), F(-1, 2), F(3, 4)])
def test_section_round_trip(n, tau):
    rep = verify_section_bijectivity(n, tau, 200, seed=11)
    assert rep.ok, rep.counterexample


def test_zero_fiber_inverse():
    fan = build_projective_fan(3)
    pre = h_inverse(fan, (F(3), F(1)), 0, 0)
    assert pre.point() == SkeletonPoint.real((0, 2, 3))
    assert h_forward_check(fan, pre, (F(3), F(1)), 0) is None


def test_simplex_support():
    assert simplex_support(3, 0) == [(0, 0, 0)]
    assert simplex_support(2, F(1, 2)) == [(F(1, 2), 0), (0, F(1, 2))]


def _sympy_preimages(c: Fraction, w: Fraction, tau: Fraction) -> list[tuple]:
    """All (r0, r1, t0, t1) on the section over (c, w) for n = 2, by case analysis on J."""
    r0, r1, t0, t1 = sympy.symbols("r0 r1 t0 t1", real=True)
    s = 1 if tau >= 0 else -1
    wq, cq, tq = (sympy.Rational(x.numerator, x.denominator) for x in (w, c, tau))
    g = (wq * s * t0 - r0) - (wq * s * t1 - r1)
    cases = {
        (0, 1): [r0 - r1, t0 + t1 - tq],
        (0,): [t1, t0 - tq],
        (1,): [t0, t1 - tq],
    }
    out = []
    for j, extra in cases.items():
        sols = sympy.solve([r0 * r1 - wq, g - cq] + extra, [r0, r1, t0, t1], dict=True)
        for sol in sols:
            vals = [sol[v] for v in (r0, r1, t0, t1)]
            if not all(v.is_real for v in vals):
                continue
            a, b, x, y = vals
            if a <= 0 or b <= 0:
                continue
            if j == (0, 1) and tq == 0 and (x != 0 or y != 0):
                continue
            if j == (0,) and not b > a or j == (1,) and not a > b:
                continue
            if any(not (0 <= s * v < 1) for v in (x, y)):
                continue
            out.append((j, a, b, x, y))
    return out


@pytest.mark.parametrize("tau", [0, F(1, 4), F(-1, 4), F(1, 2), F(-1, 2)])
def test_n2_inverse_matches_sympy(tau):
    fan = build_projective_fan(2)
    rng = random.Random(7)
    for _ in range(12):
        c = F(rng.randint(-12, 12), rng.randint(1, 4))
        w = F(rng.randint(1, 20), rng.randint(1, 4))
        pre = h_inverse(fan, (c,), w, tau)
        sols = _sympy_preimages(c, w, tau)
        # a point with equal radii can satisfy more than one case; count radii
        distinct = {(sympy.nsimplify(a), sympy.nsimplify(b)) for _, a, b, _, _ in sols}
        assert len(distinct) == 1, sols
        j, a, b, x, y = sols[0]
        rho = min(a, b)
        assert sympy.simplify(sum(sympy.Rational(k.numerator, k.denominator) * sympy.Symbol("z") ** i
                                  for i, k in enumerate(pre.root.poly)).subs("z", rho)) == 0
        assert pre.root.lo <= float(rho) <= pre.root.hi
        expect_j = frozenset(i for i, r in enumerate((a, b)) if sympy.simplify(r - rho) == 0)
        assert pre.subset == expect_j
        assert h_forward_check(fan, pre, (c,), w) is None


def test_sampled_points_lie_on_section():
    rng = random.Random(3)
    fan = build_projective_fan(3)
    for tau in (F(1, 3), F(-2, 3)):
        for _ in range(50):
            p = sample_section_point(3, tau, rng)
            assert section_violation(p, tau) is None
            c, w = h_map(fan, p, tau)
            assert w == w_map(p) > 0
