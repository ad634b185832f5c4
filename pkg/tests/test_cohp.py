from math import comb

import pytest
from hypothesis import given, strategies as st

from schoberkit.cohp import euler_char, h_basis, h_dim, serre_pair, table, table_markdown
from schoberkit.exactalg import rank

# h^i(P^m, O(d)) values computed once by hand from binomial counts
FROZEN = {
    (1, 0, 3): 4, (1, 1, -3): 2, (1, 1, -1): 0, (2, 0, 2): 6, (2, 2, -3): 1, (2, 2, -5): 6,
    (3, 0, 1): 4, (3, 3, -6): 10, (4, 0, 8): 495, (4, 4, -8): 35, (4, 2, 0): 0,
}


@pytest.mark.parametrize("key,value", sorted(FROZEN.items()))
def test_frozen_values(key, value):
    assert h_dim(*key) == value


@given(st.integers(0, 5), st.integers(-10, 10))
def test_binomial_closed_form(m, d):
    h0 = comb(d + m, m) if d >= 0 else 0
    hm = comb(-d - 1, m) if d <= -m - 1 else 0
    if m == 0:
        assert h_dim(0, 0, d) == 1
        return
    assert h_dim(m, 0, d) == h0
    assert h_dim(m, m, d) == hm
    assert all(h_dim(m, i, d) == 0 for i in range(1, m))
    assert h0 + (-1) ** m * hm == euler_char(m, d)


@given(st.integers(1, 3), st.integers(0, 4))
def test_serre_pairing_is_perfect(m, d):
    p = serre_pair(m, d)
    assert p.rows == p.cols == h_dim(m, 0, d)
    assert rank(p) == p.rows


def test_basis_matches_dimension():
    for m in range(4):
        for d in range(-6, 5):
            for i in range(m + 1):
                assert len(h_basis(m, i, d).basis) == h_dim(m, i, d)


def test_table_markdown():
    assert table(1, -2, 0)[-2] == {0: 0, 1: 1}
    md = table_markdown(1, -1, 1)
    assert md.splitlines()[0] == "| d | h^0 | h^1 |"
    assert "| 1 | 2 | 0 |" in md
