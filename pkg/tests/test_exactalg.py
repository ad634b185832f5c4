from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from schoberkit.exactalg import (
    ComplexMap,
    RatMatrix,
    RationalChainComplex,
    cohomology_dims,
    cone,
    det,
    direct_sum,
    euler_characteristic,
    hom_complex,
    inverse,
    is_acyclic,
    is_quasi_iso,
    kernel_basis,
    rank,
    shift,
    solve,
    tensor_complexes,
)
from schoberkit.exactalg.backend import compiled_rref, python_rref

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_dim=4):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    return RatMatrix.from_rows([[draw(fracs) for _ in range(c)] for _ in range(r)], c)


def to_sympy(m: RatMatrix) -> sympy.Matrix:
    return sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for r in m.entries for x in r])


@given(matrices())
def test_rank_matches_sympy(m):
    assert rank(m) == to_sympy(m).rank()


@given(matrices())
def test_kernel_vectors_are_in_kernel(m):
    ks = kernel_basis(m)
    assert len(ks) == m.cols - rank(m)
    for v in ks:
        assert all(x == 0 for x in m.apply(v))


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(fracs, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(rows):
    m = RatMatrix.from_rows(rows)
    d = to_sympy(m).det()
    assert det(m) == Fraction(int(d.p), int(d.q))
    if det(m) != 0:
        assert inverse(m) @ m == RatMatrix.identity(m.rows)


@given(matrices())
def test_compiled_kernel_agrees_with_python(m):
    fast = compiled_rref()
    if fast is None:
        pytest.skip("compiled kernel not built")
    rows = [list(r) for r in m.entries]
    assert fast([list(r) for r in rows], m.cols) == python_rref([list(r) for r in rows], m.cols)


def test_solve():
    a = RatMatrix.from_rows([[1, 2], [3, 4]])
    x = solve(a, [Fraction(5), Fraction(6)])
    assert a.apply(x) == (5, 6)
    assert solve(RatMatrix.from_rows([[1, 1], [1, 1]]), [Fraction(0), Fraction(1)]) is None


def two_term(m: RatMatrix) -> RationalChainComplex:
    return RationalChainComplex.build({0: m.cols, 1: m.rows}, {0: m})


@given(matrices())
def test_two_term_cohomology_and_euler(m):
    c = two_term(m)
    r = rank(m)
    dims = cohomology_dims(c)
    assert dims.get(0, 0) == m.cols - r and dims.get(1, 0) == m.rows - r
    assert euler_characteristic(c) == m.cols - m.rows


@given(matrices())
def test_cone_of_identity_is_acyclic(m):
    c = two_term(m)
    assert is_acyclic(cone(ComplexMap.identity(c)))
    assert is_quasi_iso(ComplexMap.identity(c))


@given(matrices(), st.integers(-3, 3))
def test_shift_moves_cohomology(m, k):
    c = two_term(m)
    assert cohomology_dims(shift(c, k)) == {i - k: v for i, v in cohomology_dims(c).items()}


@given(matrices(3), matrices(3))
def test_kunneth_for_tensor_and_hom(a, b):
    ca, cb = two_term(a), two_term(b)
    ha, hb = cohomology_dims(ca), cohomology_dims(cb)
    expect_t, expect_h = {}, {}
    for i, x in ha.items():
        for j, y in hb.items():
            expect_t[i + j] = expect_t.get(i + j, 0) + x * y
            expect_h[j - i] = expect_h.get(j - i, 0) + x * y
    assert cohomology_dims(tensor_complexes(ca, cb)) == expect_t
    assert cohomology_dims(hom_complex(ca, cb)) == expect_h


def test_direct_sum_adds():
    a = two_term(RatMatrix.from_rows([[1, 0]]))
    b = RationalChainComplex.single(2, 1)
    assert cohomology_dims(direct_sum(a, b)) == {0: 1, 1: 2}


def test_rejects_non_complex():
    m = RatMatrix.from_rows([[1]])
    with pytest.raises(ValueError):
        RationalChainComplex.build({0: 1, 1: 1, 2: 1}, {0: m, 1: m})


def test_rejects_non_chain_map():
    c = two_term(RatMatrix.from_rows([[1]]))
    with pytest.raises(ValueError):
        ComplexMap(c, c, {0: RatMatrix.from_rows([[1]]), 1: RatMatrix.from_rows([[2]])})
