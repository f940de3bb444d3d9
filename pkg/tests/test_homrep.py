import numpy as np
import pytest

from sixfold.certificates import model_for
from sixfold.curves import basic_chordal_curves
from sixfold.engine import g2_curves, leaf_generators, prove
from sixfold.homrep import (ClosureInfeasible, TwistWord, alpha_matrix, closure_mod_p, evaluate,
                            homology, identity, is_symplectic, lattice_basis, mat_mul,
                            matrix_order, sp_order, standard_form, twist_matrix)


def test_sp_order_formula():
    assert sp_order(1, 2) == 6
    assert sp_order(2, 2) == 720
    assert sp_order(2, 3) == 51840
    assert sp_order(3, 2) == 1451520


@pytest.mark.parametrize("g", [2, 3, 5, 8, 13, 20])
def test_alpha_has_order_six(g):
    a = alpha_matrix(model_for(g))
    assert is_symplectic(a)
    assert matrix_order(a) == 6


@pytest.mark.parametrize("g", [2, 4, 7])
def test_classes_span_lattice(g):
    m = model_for(g)
    h = homology(m)
    classes = [h.curve_class(c) for c in basic_chordal_curves(m)]
    assert len(lattice_basis(classes)) == 2 * g
    e = [tuple(int(i == j) for j in range(2 * g)) for i in range(2 * g)]
    assert [[h.pairing(u, v) for v in e] for u in e] == [list(r) for r in standard_form(g)]


def test_rotation_acts_on_classes():
    m = model_for(5)
    h = homology(m)
    for c in basic_chordal_curves(m)[:8]:
        v = h.curve_class(c)
        rv = tuple(sum(a * x for a, x in zip(row, v)) for row in h.alpha)
        assert rv == h.curve_class(c.rotated(1))


def test_twist_inverse_and_power():
    v = (1, 0, 2, -1)
    t = twist_matrix(v)
    assert mat_mul(t, twist_matrix(v, -1)) == identity(4)
    assert mat_mul(t, t) == twist_matrix(v, 2)
    assert is_symplectic(t)


def test_conventions_are_mirror_images():
    c = g2_curves()
    w = TwistWord.twist(c[0]) * TwistWord.twist(c[1])
    assert evaluate(w, convention="left") == evaluate(w.reversed())
    assert evaluate(w) != evaluate(w, convention="left")
    with pytest.raises(ValueError):
        evaluate(w, convention="middle")


def test_single_transvection_closure_is_cyclic():
    v = homology(model_for(2)).curve_class(g2_curves()[0])
    res = closure_mod_p([twist_matrix(v)], 3)
    assert res.order == 3
    assert not res.is_full


@pytest.mark.parametrize("p,order", [(2, 720), (3, 51840)])
def test_genus2_closure_full(p, order):
    gens = leaf_generators(prove(2, closure=False))
    res = closure_mod_p(gens, p)
    assert res.order == order == sp_order(2, p)
    assert res.is_full and res.complete
    assert sum(res.levels) == order


def test_closure_growth_cap_stops_early():
    gens = leaf_generators(prove(2, closure=False))
    res = closure_mod_p(gens, 3, max_elements=1000)
    assert not res.complete
    assert res.order >= 1000


def test_closure_respects_memory_budget():
    gens = leaf_generators(prove(2, closure=False))
    with pytest.raises(ClosureInfeasible):
        closure_mod_p(gens, 3, mem_budget=10_000)


def test_closure_rejects_non_symplectic():
    bad = np.eye(4, dtype=np.int64)
    bad[0, 1] = 1
    with pytest.raises(ValueError):
        closure_mod_p([bad], 2)
