from fractions import Fraction

import pytest

from sixfold.branching import model_tuple
from sixfold.curves import (Chord, ChordalCurve, CurveError, algebraic_crossings,
                            basic_chordal_curves, basic_curve, circle_point, crossing_count,
                            curve_family, find_bigon, geometric_intersection, invariant_curve)
from sixfold.homrep import homology
from sixfold.polygon import build_model


@pytest.fixture(scope="module")
def m5():
    return build_model(model_tuple(5))


def test_chord_crossing_is_interleaving():
    a = Chord(Fraction(0), Fraction(1, 2))
    assert a.crosses(Chord(Fraction(1, 4), Fraction(3, 4)))
    assert not a.crosses(Chord(Fraction(1, 8), Fraction(3, 8)))
    with pytest.raises(CurveError):
        a.crosses(Chord(Fraction(0), Fraction(1, 4)))
    assert a.crossing_sign(Chord(Fraction(1, 4), Fraction(3, 4))) == -a.crossing_sign(
        Chord(Fraction(3, 4), Fraction(1, 4)))


def test_circle_point_is_on_circle():
    for k in range(1, 12):
        x, y = circle_point(Fraction(k, 12))
        assert x * x + y * y == 1


def test_basic_curves_are_cycles(m5):
    for c in basic_chordal_curves(m5):
        assert c.is_basic
        assert c.kind in "pqr"
        assert c.model.glue(c.chords[0].end) == c.chords[0].start


def test_not_a_cycle_rejected(m5):
    with pytest.raises(CurveError):
        ChordalCurve(m5, (Chord(Fraction(1, 100), Fraction(1, 3)),))


def test_rotation_preserves_kind_and_chords(m5):
    c = curve_family(m5)[0]
    assert c.rotated(6).same_chords(c)
    assert c.rotated(1).kind == c.kind


def test_invariant_curve(m5):
    e = m5.edge_index(0, 0, "A")
    c = invariant_curve(m5, m5.point_on_edge(e, Fraction(1, 3)), 3)
    assert c.rotated(3).same_chords(c)


def test_self_intersection_is_zero(m5):
    for c in curve_family(m5)[:6]:
        cert = geometric_intersection(c, c)
        assert cert.value == 0


def test_parallel_copy_is_disjoint(m5):
    c = curve_family(m5)[0]
    d = c.parallel_copy()
    assert crossing_count(c, d) == 0
    assert homology(m5).curve_class(c) == homology(m5).curve_class(d)


def test_algebraic_matches_homology(m5):
    h = homology(m5)
    fam = curve_family(m5)
    for c in fam[:8]:
        for d in fam[:8]:
            if c.same_chords(d):
                continue
            try:
                alg = algebraic_crossings(c, d)
            except CurveError:
                continue
            assert abs(alg) == abs(h.pairing(h.curve_class(c), h.curve_class(d)))


def test_commtrick_intersection_pattern_g5(m5):
    c = basic_curve(m5, m5.edge_index(0, 0, "A"))
    assert c.kind == "p"
    values = {geometric_intersection(c, d).value for d in basic_chordal_curves(m5, "r")}
    assert 1 in values


def _curve(m, pairs):
    return ChordalCurve(m, tuple(Chord(Fraction(a), Fraction(b)) for a, b in pairs))


def test_bigon_closes_gap():
    m = build_model(model_tuple(3))
    c = _curve(m, [("1/144", "17/144"), ("95/144", "127/144")])
    d = _curve(m, [("1/144", "35/48"), ("13/48", "31/144"), ("49/144", "1/16"),
                   ("29/48", "79/144"), ("97/144", "19/48"), ("15/16", "127/144")])
    cert = geometric_intersection(c, d)
    assert cert.bigon is not None
    assert (cert.upper, cert.lower) == (1, 1)
    assert cert.to_json()["bigon"] is not None


def test_no_bigon_in_minimal_position(m5):
    fam = curve_family(m5)
    c, d = fam[0], fam[1]
    cert = geometric_intersection(c, d)
    if cert.upper == cert.lower:
        a, b = cert.realized
        assert find_bigon(a, b) is None


def test_json_round_trip(m5):
    c = curve_family(m5)[3]
    assert ChordalCurve.from_json(m5, c.to_json()) == c
