import pytest
from hypothesis import given, strategies as st

from sixfold.branching import (BranchingError, BranchingVector, MonodromyTuple,
                               branching_from_tuple, fixed_point_count, genus_from_branching,
                               genus_of, hyperelliptic_flag, model_table, model_tuple)

# (g, (p, q, r), tuple, fixed points of alpha^3), one literal row per genus
TABLE = [
    (2, (2, 1, 0), "1^2 4", 2),
    (3, (2, 0, 2), "1 5 3^2", 8),
    (4, (3, 0, 1), "1^3 3", 6),
    (5, (2, 1, 2), "1^2 4 3^2", 8),
    (6, (3, 1, 1), "1^2 5 2 3", 6),
    (7, (3, 0, 3), "1^3 3^3", 12),
    (8, (2, 1, 4), "1^2 4 3^4", 14),
    (9, (3, 1, 3), "1^2 5 2 3^3", 12),
    (10, (3, 0, 5), "1^3 3^5", 18),
    (11, (2, 1, 6), "1^2 4 3^6", 20),
    (12, (3, 1, 5), "1^2 5 2 3^5", 18),
    (13, (3, 0, 7), "1^3 3^7", 24),
    (14, (2, 1, 8), "1^2 4 3^8", 26),
    (15, (3, 1, 7), "1^2 5 2 3^7", 24),
    (16, (3, 0, 9), "1^3 3^9", 30),
    (17, (2, 1, 10), "1^2 4 3^10", 32),
    (18, (3, 1, 9), "1^2 5 2 3^9", 30),
    (19, (3, 0, 11), "1^3 3^11", 36),
    (20, (2, 1, 12), "1^2 4 3^12", 38),
]


@pytest.mark.parametrize("g, pqr, symbol, fp3", TABLE)
def test_table_rows(g, pqr, symbol, fp3):
    t = model_tuple(g)
    assert str(t) == symbol
    assert branching_from_tuple(t).as_tuple() == pqr
    assert genus_of(t) == g
    assert fixed_point_count(t, 3) == fp3
    assert hyperelliptic_flag(t) == (g == 3)
    if g != 3:
        assert fp3 < 2 * g + 2


def test_riemann_hurwitz_examples():
    assert genus_from_branching(BranchingVector(2, 1, 0)) == 2
    assert genus_from_branching(BranchingVector(3, 0, 1)) == 4
    with pytest.raises(BranchingError):
        genus_from_branching(BranchingVector(1, 0, 0))


def test_tuple_validation():
    with pytest.raises(BranchingError):
        MonodromyTuple((1, 1, 1))  # sum not 0 mod 6
    with pytest.raises(BranchingError):
        MonodromyTuple((2, 4))  # does not generate
    with pytest.raises(BranchingError):
        MonodromyTuple((3, 1, 5, 3))  # order
    with pytest.raises(BranchingError):
        model_tuple(1)


def test_parse_round_trip():
    for g in range(2, 21):
        t = model_tuple(g)
        assert MonodromyTuple.parse(str(t)) == t


def test_model_table_json():
    rows = model_table(range(2, 8))
    assert len(rows) == 6
    assert rows[1].to_json()["hyperelliptic"] is True
    assert model_table([]) == []


@given(st.integers(0, 4), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 6))
def test_genus_formula_matches_euler_count(a, a5, b, b4, r):
    try:
        t = MonodromyTuple.from_exponents(a, a5, b, b4, r)
    except BranchingError:
        return
    v = branching_from_tuple(t)
    # Euler characteristic of the cover: 6 * (2 - n) + sum of orbit sizes
    n = len(t)
    chi = 6 * (2 - n) + sum(6 // o for o in (6,) * v.p + (3,) * v.q + (2,) * v.r)
    if (2 - chi) % 2 == 0 and chi <= 2:
        assert genus_of(t) == (2 - chi) // 2
