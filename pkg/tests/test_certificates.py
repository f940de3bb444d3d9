import copy
import json

import pytest

from sixfold.certificates import (CertificateError, alpha_certificate, commtrick,
                                  diameter_certificate, invariant_certificate, model_for, replay)
from sixfold.curves import basic_chordal_curves, invariant_curve
from sixfold.homrep import evaluate


@pytest.fixture(scope="module")
def m7():
    return model_for(7)


@pytest.fixture(scope="module")
def cert7(m7):
    return commtrick(basic_chordal_curves(m7, "p")[0])


def test_commtrick_derives_target(cert7):
    assert cert7.homology_ok
    assert cert7.facts["conjugation_shadow"] and cert7.facts["braid_shadow"]
    assert [f["value"] for f in cert7.facts["intersections"]] == [1, 0, 0]


def test_commtrick_replays(m7, cert7):
    data = json.loads(json.dumps(cert7.to_json()))
    assert replay(data, m7)


def test_tampered_fact_rejected(m7, cert7):
    data = copy.deepcopy(cert7.to_json())
    data["facts"]["intersections"][1]["value"] = 1
    assert not replay(data, m7)


def test_tampered_derivation_rejected(m7, cert7):
    data = copy.deepcopy(cert7.to_json())
    data["derivation"][0][1] = -1
    assert not replay(data, m7)


def test_unknown_reason_rejected(m7, cert7):
    data = copy.deepcopy(cert7.to_json())
    data["reason"] = "trust-me"
    assert not replay(data, m7)


def test_json_is_deterministic(m7):
    c = basic_chordal_curves(m7, "p")[1]
    assert json.dumps(commtrick(c).to_json()) == json.dumps(commtrick(c).to_json())


def test_commtrick_needs_genus_three():
    with pytest.raises(CertificateError):
        commtrick(basic_chordal_curves(model_for(2), "p")[0])


def test_commtrick_refuses_q_curves():
    m = model_for(5)
    with pytest.raises(CertificateError):
        commtrick(basic_chordal_curves(m, "q")[0])


def test_type_r_by_half_turn(m7):
    c = basic_chordal_curves(m7, "r")[0]
    cert = diameter_certificate(c)
    assert cert.homology_ok
    assert replay(cert.to_json(), m7)


def test_alpha_leaf(m7):
    a = alpha_certificate()
    assert replay(a.to_json(), m7)


def test_invariant_curve_certificate():
    m = model_for(4)
    c = invariant_curve(m, basic_chordal_curves(m)[0].chords[0].start, 3, name="v")
    cert = invariant_certificate([c], 3)
    assert cert.homology_ok
    assert evaluate(cert.subject, m) == evaluate(cert.subject.reversed(), m)
