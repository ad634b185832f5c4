from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from schoberkit.cellccc import (
    CellCircle,
    CellSheafComplex,
    build_generator,
    ccc_compare,
    cell_hom_dims,
    coherent_table,
    convolve,
    local_system,
    local_system_check,
    refine,
    sheaf_json,
    subdivide,
    torsion_point,
    unit_comparison,
)
from schoberkit.exactalg import cohomology_dims
from schoberkit.lbcx import rhom_dims, shift_lb, tensor

F = Fraction
names = st.sampled_from(["unit", "twist", "constant", "loc2", "loc-3"])


def sheaf(name: str, circle: CellCircle | None = None) -> CellSheafComplex:
    if name.startswith("loc"):
        return local_system(int(name[3:]), circle)
    return build_generator(name, circle)


circles = st.lists(st.integers(1, 11), max_size=4, unique=True).map(
    lambda xs: CellCircle(tuple(F(x, 12) for x in [0] + sorted(xs))))


def test_grid_matches_line_bundles():
    # Ext^i(O(a), O(b)) on P^1 is h^i(O(b - a))
    assert cell_hom_dims(build_generator("unit"), build_generator("unit")) == {0: 1}
    assert cell_hom_dims(build_generator("unit"), build_generator("twist")) == {}
    assert cell_hom_dims(build_generator("twist"), build_generator("unit")) == {0: 2}
    assert cell_hom_dims(build_generator("twist"), build_generator("twist")) == {0: 1}
    assert coherent_table(-1, 0) == {0: 2}
    rep = ccc_compare()
    assert rep.ok and rep.to_json()["ok"]


def test_constant_sheaf_cohomology():
    const = build_generator("constant")
    assert cell_hom_dims(const, const) == {0: 1, 1: 1}
    # unit is the skyscraper at e, and i^! of the constant sheaf at a point of S^1 is Q[-1]
    assert cell_hom_dims(build_generator("unit"), const) == {1: 1}
    assert cell_hom_dims(const, build_generator("unit")) == {0: 1}


@settings(max_examples=25)
@given(names, names, circles, st.integers(2, 3))
def test_refinement_invariance(a, b, circle, m):
    base = cell_hom_dims(sheaf(a), sheaf(b))
    fa, fb = refine(sheaf(a), circle), refine(sheaf(b), circle)
    assert cell_hom_dims(fa, fb) == base
    fine = subdivide(circle, m)
    assert cell_hom_dims(refine(fa, fine), refine(fb, fine)) == base


def test_refine_rejects_coarser():
    with pytest.raises(ValueError):
        refine(build_generator("twist", CellCircle.uniform(3)), CellCircle.uniform(2))
    with pytest.raises(ValueError):
        CellCircle((F(1, 2),))
    with pytest.raises(ValueError):
        cell_hom_dims(build_generator("unit"), build_generator("unit", CellCircle.uniform(2)))


def test_twist_square():
    t = build_generator("twist")
    tt = convolve(t, t)
    assert tt.in_window()
    for name, a in (("unit", 0), ("twist", -1)):
        g = build_generator(name)
        assert cell_hom_dims(g, tt) == coherent_table(a, -2)
        assert cell_hom_dims(tt, g) == coherent_table(-2, a)


@settings(max_examples=10)
@given(names, circles)
def test_unit_is_a_unit(name, circle):
    g = refine(sheaf(name), circle)
    cmp = unit_comparison(g)
    assert cmp.is_morphism() and cmp.is_quasi_iso()


@settings(max_examples=10)
@given(names, names)
def test_convolution_is_commutative_on_tables(a, b):
    ab, ba = convolve(sheaf(a), sheaf(b)), convolve(sheaf(b), sheaf(a))
    assert ab.in_window() and ba.in_window()
    for probe in ("unit", "twist"):
        p = build_generator(probe)
        assert cell_hom_dims(p, ab) == cell_hom_dims(p, ba)
        assert cell_hom_dims(ab, p) == cell_hom_dims(ba, p)


def test_convolution_on_mismatched_circles():
    t1 = build_generator("twist", CellCircle((0, F(1, 3))))
    t2 = build_generator("twist", CellCircle((0, F(1, 2))))
    tt = convolve(t1, t2)
    assert tt.in_window()
    ref = convolve(build_generator("twist"), build_generator("twist"))
    u = build_generator("unit")
    assert cell_hom_dims(refine(u, tt.circle), tt) == cell_hom_dims(u, ref)


def test_local_systems():
    for lam in (1, 2, 5, F(-1, 3)):
        assert local_system_check(lam, [1, 2, 5, 7]).ok
    with pytest.raises(ValueError):
        local_system(0)
    assert rhom_dims(torsion_point(2), torsion_point(3)) == {}


def test_local_system_convolution_matches_torsion_tensor():
    # L_lam goes to the skyscraper at [1 : lam] shifted by [-1]; convolution to tensor
    l2, l3 = local_system(2), local_system(3)
    assert all(not cohomology_dims(v) for v in convolve(l2, l3).vertices)
    sq = convolve(l2, l2)
    p = shift_lb(torsion_point(2), -1)
    assert cell_hom_dims(l2, sq) == rhom_dims(p, tensor(p, p)) == {0: 1, 1: 2, 2: 1}
    assert cell_hom_dims(sq, l2) == rhom_dims(tensor(p, p), p)


def test_json_round_trip():
    for name in ("unit", "twist", "loc2"):
        f = refine(sheaf(name), CellCircle((0, F(1, 4), F(1, 2))))
        assert CellSheafComplex.from_json(f.to_json()) == f
        assert sheaf_json(f) == sheaf_json(CellSheafComplex.from_json(f.to_json()))


def test_generization():
    t = build_generator("twist", CellCircle.uniform(2))
    assert t.generization(("v", 0), +1, ("e", 0)) == t.right[0]
    assert t.generization(("v", 0), -1, ("e", 1)) == t.left[0]
    with pytest.raises(ValueError):
        t.generization(("v", 0), +1, ("e", 1))
    with pytest.raises(ValueError):
        build_generator("nope")
