from fractions import Fraction

import pytest

from sixfold.certificates import model_for
from sixfold.curves import basic_chordal_curves, basic_curve, crossing_count, curve_family
from sixfold.engine import base_case, prove
from sixfold.subsurface import (NoStabilizationNeeded, SubsurfaceError, bounds_disk,
                                bounds_pants, cut, d_convex_hull, is_stabilization,
                                isotopic_disjoint, regular_neighbourhood)


@pytest.mark.parametrize("g", range(2, 21))
def test_family_hull_is_whole_surface(g):
    m = model_for(g)
    S = d_convex_hull(m, curve_family(m))
    assert S.invariants() == (g, 0, True)
    two_inessential = g % 3 == 2 or (g % 3 == 0 and g > 3)
    assert S.residual_filled == (2 if two_inessential else 0)


def test_cut_euler_matches_surface():
    m = model_for(4)
    cu = cut(m, basic_chordal_curves(m)[0].chords)
    assert sum(p.euler for p in cu.pieces) == 2 - 2 * 4


def test_basic_curves_are_essential():
    m = model_for(6)
    assert not any(bounds_disk(c) for c in basic_chordal_curves(m))


def test_parallel_copies_are_isotopic():
    m = model_for(5)
    e = m.edge_index(0, 0, "A")
    a = basic_curve(m, e, Fraction(1, 3), name="a")
    b = basic_curve(m, e, Fraction(1, 2), name="b")
    assert isotopic_disjoint(a, b)
    others = [c for c in basic_chordal_curves(m)
              if crossing_count(a, c) == 0 and not c.same_chords(b)]
    assert others
    assert not any(isotopic_disjoint(a, c) for c in others)


@pytest.mark.parametrize("g", [3, 4, 5, 6])
def test_base_chain_bounds_pants(g):
    c1, _, c3, _, c5 = base_case(g).curves[:5]
    assert bounds_pants([c1, c3, c5])


def test_chain_neighbourhood_invariants():
    curves = base_case(4).curves
    assert regular_neighbourhood(curves).invariants()[:2] == (2, 2)
    assert regular_neighbourhood(curves[:1]).invariants()[:2] == (0, 2)


def test_hull_needs_curves():
    with pytest.raises(SubsurfaceError):
        d_convex_hull(model_for(3), [])


def test_stabilization_of_contained_curve_refused():
    b = base_case(4)
    with pytest.raises(NoStabilizationNeeded):
        is_stabilization(b.subsurface, b.curves[0])


@pytest.mark.parametrize("g", [4, 5, 6, 7])
def test_steps_follow_dichotomy(g):
    chain = prove(g, closure=False)
    for step in chain.steps:
        assert step.stabilization.verified
        assert step.delta in ((0, 1), (1, -1))
        assert step.matches_dichotomy
    assert chain.final[:2] == (g, 0)
