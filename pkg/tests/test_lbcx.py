import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from schoberkit.cohp import h_dim
from schoberkit.exactalg import cohomology_dims, cohomology_map, rank
from schoberkit.lbcx import (
    HomogPoly,
    LBComplex,
    LBMap,
    RGammaDiagnostic,
    cone_lb,
    dense_cech_complex,
    e_cap_context,
    expected_euler,
    find_homotopy,
    identity_map,
    is_equivalence,
    is_zero_object,
    koszul_complex,
    map_scale,
    rgamma,
    rgamma_at_floor,
    rhom_dims,
    sheaf_dual,
    shift_lb,
    sufficient_floor,
    tensor,
    transfer_map,
    twist,
    validate,
    validate_map,
)
from schoberkit.suite import random_lbcomplex

x0, x1 = HomogPoly.var(2, 0), HomogPoly.var(2, 1)


def line_map(m: int, a: int, b: int, poly: HomogPoly) -> LBMap:
    return LBMap(LBComplex.line(m, a), LBComplex.line(m, b), {0: ((poly,),)})


def test_validate_reports_grading_and_square():
    bad = LBComplex(1, -1, 0, {-1: (0,), 0: (0,)}, {-1: ((x0,),)})
    rep = validate(bad)
    assert not rep.ok and "grading" in rep.violation
    k = LBComplex(1, -2, 0, {-2: (-2,), -1: (-1,), 0: (0,)}, {-2: ((x0,),), -1: ((x1,),)})
    rep = validate(k)
    assert not rep.ok and "o d" in rep.violation
    assert validate(koszul_complex(2)).ok


def test_validate_map_square():
    s = LBComplex.two_term(1, -1, 0, x0)
    f = LBMap(s, s, {-1: ((HomogPoly.const(2),),), 0: ((HomogPoly.const(2, 2),),)})
    assert not validate_map(f).ok
    assert validate_map(identity_map(s)).ok


def test_json_round_trip():
    k = koszul_complex(2)
    assert LBComplex.from_json(k.to_json()) == k
    f = identity_map(k)
    assert LBMap.from_json(f.to_json()) == f


@given(st.integers(0, 3), st.integers(-6, 6), st.integers(-6, 6))
def test_rhom_between_lines(m, a, b):
    expect = {i: h_dim(m, i, b - a) for i in range(m + 1) if h_dim(m, i, b - a)}
    assert rhom_dims(LBComplex.line(m, a), LBComplex.line(m, b)) == expect


@given(st.integers(1, 3), st.integers(-4, 4), st.integers(-2, 2))
def test_shift_and_twist(m, d, k):
    c = LBComplex.line(m, d)
    base = rgamma(c).dims
    assert rgamma(shift_lb(c, k)).dims == {i - k: v for i, v in base.items()}
    assert rgamma(twist(c, 1)).dims == rgamma(c, 1).dims


def test_koszul_is_zero_and_with_other_forms():
    for m in range(4):
        assert is_zero_object(koszul_complex(m))
    forms = [HomogPoly.linear([1, 1, 0]), HomogPoly.linear([0, 1, 1]), HomogPoly.linear([1, 0, 2])]
    assert is_zero_object(koszul_complex(2, forms))
    # dependent forms vanish at a common point, so the complex is no longer zero
    dep = [HomogPoly.linear([1, 0, 0]), HomogPoly.linear([0, 1, 0]), HomogPoly.linear([1, 1, 0])]
    assert not is_zero_object(koszul_complex(2, dep))


def test_cone_of_identity_and_equivalences():
    c = LBComplex.two_term(2, -1, 1, HomogPoly.monomial((1, 1, 0)))
    assert is_zero_object(cone_lb(identity_map(c)))
    assert is_equivalence(map_scale(identity_map(c), 3))
    assert not is_equivalence(line_map(1, -1, 0, x0))


def test_skyscraper_ext():
    p = LBComplex.two_term(1, -1, 0, x0)
    assert rgamma(p).dims == {0: 1}
    assert rhom_dims(p, p) == {0: 1, 1: 1}
    q = LBComplex.two_term(1, -1, 0, x1)
    assert rhom_dims(p, q) == {}


def test_dual_is_transpose():
    c = LBComplex.two_term(1, -1, 0, x0)
    d = sheaf_dual(c)
    assert (d.lo, d.hi) == (0, 1) and d.term(0) == (0,) and d.term(1) == (1,)
    assert sheaf_dual(d) == c


def test_tensor_with_koszul_is_zero():
    k = koszul_complex(1)
    assert is_zero_object(tensor(k, LBComplex.two_term(1, -2, 1, HomogPoly.monomial((2, 1)))))


@settings(max_examples=25)
@given(st.integers(0, 10**6))
def test_dense_cech_agrees_with_perturbed_model(seed):
    rng = random.Random(seed)
    c = random_lbcomplex(rng, rng.randint(1, 2))
    res = rgamma(c)
    floor = sufficient_floor(c)
    dense = cohomology_dims(dense_cech_complex(c, 0, floor))
    assert dense == rgamma_at_floor(c, 0, floor).dims == res.dims
    assert res.euler == expected_euler(c)


def test_transfer_map_induces_multiplication():
    f = line_map(1, 0, 1, x0)
    t = transfer_map(f)
    # x0 : H^0(O) -> H^0(O(1)) is injective with image of rank 1
    assert rank(cohomology_map(t, 0)) == 1
    g = line_map(1, -2, -1, x0)
    # x0 : H^1(O(-2)) -> H^1(O(-1)) = 0
    assert cohomology_map(transfer_map(g), 1).cols == 1


def test_find_homotopy():
    s = LBComplex.two_term(1, -1, 0, x0)
    f = identity_map(s)
    assert find_homotopy(f, f) is not None
    zero = map_scale(f, 0)
    assert find_homotopy(f, zero) is None  # s is not zero
    # the Koszul complex is zero in the derived category but resolves the
    # residue field, so its identity is not polynomially null-homotopic
    k = koszul_complex(1)
    assert find_homotopy(identity_map(k), map_scale(identity_map(k), 0)) is None
    c = cone_lb(identity_map(s))
    assert find_homotopy(identity_map(c), map_scale(identity_map(c), 0)) is not None


def test_e_cap_diagnostic():
    c = LBComplex.line(2, -9)
    with pytest.raises(RGammaDiagnostic, match="floor cap"):
        rgamma(c, e_cap=2)
    with e_cap_context(2):
        with pytest.raises(RGammaDiagnostic):
            rgamma(c)
    assert rgamma(c).dims == {2: h_dim(2, 2, -9)}


def test_polynomial_arithmetic():
    p = x0 * x1 + x0 * x0
    assert p.degree == 2
    assert p.evaluate([Fraction(1), Fraction(2)]) == 3
    with pytest.raises(ValueError):
        HomogPoly(2, {(1, 0): 1, (2, 0): 1})
