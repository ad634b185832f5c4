from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from schoberkit.exactalg import RatMatrix, inverse
from schoberkit.lbcx import LBComplex, LBMap
from schoberkit.schober import (
    PerverseDiskDatum,
    SchoberDiagram,
    check_perverse,
    diagram_direct_sum,
    diagram_hom_dims,
    diagram_json,
    has_no_origin_sections,
    interval_diagram,
    intertwines,
    ledger_compose,
    ledger_entry,
    ledger_hyper_crosscheck,
    ledger_inverse,
    ledger_to_coherent,
    ledger_unit,
    monodromies,
    unit_push_diagram,
    validate_diagram,
)

fracs = st.fractions(min_value=-3, max_value=3, max_denominator=3)
taus = st.fractions(min_value=-3, max_value=3, max_denominator=8)


@st.composite
def perverse_data(draw):
    a, b = draw(st.integers(0, 3)), draw(st.integers(0, 3))
    p = [[draw(fracs) for _ in range(a)] for _ in range(b)]
    q = [[draw(fracs) for _ in range(b)] for _ in range(a)]
    return PerverseDiskDatum.from_lists(p, q, a, b)


def test_small_perverse_examples():
    zero = PerverseDiskDatum.from_lists([[0]], [[0]], 1, 1)
    assert check_perverse(zero).ok and not has_no_origin_sections(zero)
    bad = PerverseDiskDatum.from_lists([[1]], [[1]], 1, 1)
    chk = check_perverse(bad)
    assert not chk.ok and chk.failing == ("m_phi", "m_psi")
    with pytest.raises(ValueError):
        monodromies(bad)
    # the constant sheaf: Phi = 0
    const = PerverseDiskDatum.from_lists([], [], 0, 2)
    assert check_perverse(const).ok and has_no_origin_sections(const)


def test_shape_mismatch():
    with pytest.raises(ValueError):
        PerverseDiskDatum(RatMatrix.zeros(2, 1), RatMatrix.zeros(2, 1))


@given(perverse_data())
def test_intertwining_identity(d):
    assert intertwines(d)


@given(perverse_data())
def test_monodromy_inverses_and_json(d):
    assert PerverseDiskDatum.from_json(d.to_json()) == d
    if check_perverse(d).ok:
        mono = monodromies(d)
        assert mono.inv_phi @ mono.m_phi == RatMatrix.identity(d.dim_phi)
        assert mono.inv_psi @ mono.m_psi == RatMatrix.identity(d.dim_psi)
        # conjugating q along p: q m_Psi = m_Phi q as well
        assert d.q @ mono.m_psi == mono.m_phi @ d.q


@given(taus, taus, taus)
def test_ledger_group_law(a, b, c):
    ea, eb, ec = ledger_entry(a), ledger_entry(b), ledger_entry(c)
    assert ledger_compose(ledger_compose(ea, eb), ec) == ledger_compose(ea, ledger_compose(eb, ec))
    assert ledger_compose(ea, ledger_unit()) == ea == ledger_compose(ledger_unit(), ea)
    assert ledger_compose(ea, ledger_inverse(ea)) == ledger_unit()
    assert ledger_compose(ea, eb) == ledger_compose(eb, ea)


@given(taus)
def test_ledger_fields(t):
    e = ledger_entry(t)
    assert 0 <= e.theta < 1
    assert e.winding + e.theta == t
    assert e.shift == 2 * e.winding


@given(st.integers(-4, 4))
def test_full_loops_to_coherent(k):
    desc = ledger_to_coherent(ledger_entry(k))
    assert (desc.twist, desc.shift) == (-k, 2 * k)


def test_partial_loop_has_no_coherent_counterpart():
    with pytest.raises(ValueError):
        ledger_to_coherent(ledger_entry(Fraction(1, 2)))


def test_half_loops_compose_to_full():
    half = ledger_entry(Fraction(1, 2))
    full = ledger_compose(half, half)
    assert full.to_json() == {"tau_turns": "1", "winding": 1, "theta_turns": "0", "shift": 2}


@pytest.mark.parametrize("n", [2, 3])
def test_ledger_matches_inverse_twist(n):
    assert all(ledger_hyper_crosscheck(n).values())


def test_unit_push_diagram_endomorphisms():
    # n = 2: Hom complex is cone(RHom(O,O) + RHom(pt,pt) -> RHom(O,pt))[-1] on P^1;
    # on H^0 the map (x, y) -> x - y is onto, leaving Q in degree 0 and Ext^1(pt, pt)
    dg = unit_push_diagram(2)
    assert validate_diagram(dg).ok
    assert diagram_hom_dims(dg, dg) == {0: 1, 1: 1}


def test_diagram_json_round_trip():
    dg = unit_push_diagram(3, -1)
    assert SchoberDiagram.from_json(dg.to_json()) == dg
    assert diagram_json(dg) == diagram_json(SchoberDiagram.from_json(dg.to_json()))


def test_validate_diagram_problems():
    dg = unit_push_diagram(2)
    broken = SchoberDiagram(2, 3, dg.m0, dg.ms, dg.maps)
    rep = validate_diagram(broken)
    assert not rep.ok and any("expected 2 objects" in p for p in rep.problems)
    wrong_space = SchoberDiagram(2, 2, LBComplex.line(1, 0), dg.ms, dg.maps)
    assert not validate_diagram(wrong_space).ok
    with pytest.raises(ValueError):
        diagram_hom_dims(broken, dg)


def test_interval_self_ext():
    # a single vertex: End = Q
    assert diagram_hom_dims(interval_diagram(3, 1, 1), interval_diagram(3, 1, 1)) == {0: 1}
    # [2,2] -> [1,1] on 2 -> 1: the arrow gives Ext^1 = 1
    assert diagram_hom_dims(interval_diagram(3, 2, 2), interval_diagram(3, 1, 1)) == {1: 1}


def _dim_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


@settings(max_examples=20)
@given(st.integers(2, 4).flatmap(lambda r: st.tuples(
    st.just(r),
    *[st.integers(1, r - 1).flatmap(lambda a, r=r: st.tuples(st.just(a), st.integers(a, r - 1))) for _ in range(3)])))
def test_diagram_hom_is_additive(args):
    r, v, w, u = args
    dv, dw, du = (interval_diagram(r, *x) for x in (v, w, u))
    s = diagram_direct_sum(dv, dw)
    assert validate_diagram(s).ok
    assert diagram_hom_dims(s, du) == _dim_add(diagram_hom_dims(dv, du), diagram_hom_dims(dw, du))
    assert diagram_hom_dims(du, s) == _dim_add(diagram_hom_dims(du, dv), diagram_hom_dims(du, dw))


def test_direct_sum_with_pushforward():
    a, b = unit_push_diagram(2, 0), unit_push_diagram(2, -1)
    s = diagram_direct_sum(a, b)
    assert validate_diagram(s).ok
    assert diagram_hom_dims(s, a) == _dim_add(diagram_hom_dims(a, a), diagram_hom_dims(b, a))


def test_bad_map_is_reported():
    dg = unit_push_diagram(2)
    f = dg.maps[0]
    shifted = LBMap(f.source, f.target, {})
    zero_map_dg = SchoberDiagram(2, 2, dg.m0, dg.ms, (shifted,))
    assert validate_diagram(zero_map_dg).ok  # the zero map is a valid structure map
    assert inverse(RatMatrix.identity(1)) == RatMatrix.identity(1)
