"""Membership certificates for the subgroup generated by the two centralizers.

A certificate asserts that some mapping class (a twist word) lies in the
group generated by the centralizers of the square and the cube of the
rotation.  Leaves are checked from curve data alone; composite
certificates express their subject as a word in the subjects of their
children, and that word is compared with the subject on homology.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .branching import model_tuple
from .curves import ChordalCurve, CurveError, basic_curve, crossing_count, geometric_intersection
from .homrep import TwistWord, evaluate, identity, mat_mul, sp_inverse
from .polygon import PolygonModel, build_model
from .subsurface import isotopic_disjoint

REASONS = ("alpha3-invariant", "alpha2-invariant", "diameter-type-r",
           "commtrick-type-p", "word-derivation", "stabilization")


class CertificateError(ValueError):
    pass


@lru_cache(maxsize=None)
def model_for(g: int) -> PolygonModel:
    return build_model(model_tuple(g))


@dataclass
class MembershipCertificate:
    subject: TwistWord
    reason: str
    children: tuple = ()
    derivation: tuple = ()  # (child index, exponent) letters, rightmost acts first
    facts: dict = field(default_factory=dict)
    homology_ok: bool = False

    @property
    def name(self) -> str:
        return str(self.subject)

    def leaves(self):
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()

    def to_json(self) -> dict:
        return {"subject": self.subject.to_json(), "reason": self.reason,
                "children": [c.to_json() for c in self.children],
                "derivation": [list(x) for x in self.derivation],
                "facts": self.facts, "homology_ok": self.homology_ok,
                "level": "homology"}


def _word_from_json(model: PolygonModel, data: dict) -> TwistWord:
    curves = tuple(sorted((n, ChordalCurve.from_json(model, c)) for n, c in data["curves"].items()))
    return TwistWord(tuple((n, k) for n, k in data["letters"]), curves)


def _subject_curves(w: TwistWord) -> list[ChordalCurve]:
    named = dict(w.curves)
    return [named[n] for n, _ in w.letters if n in named]


def _word_matrix(model, w: TwistWord):
    return evaluate(w, model)


def _derived_matrix(model, cert: MembershipCertificate):
    mats = [_word_matrix(model, c.subject) for c in cert.children]
    out = identity(len(mats[0]))
    for idx, k in cert.derivation:
        m = mats[idx] if k > 0 else sp_inverse(mats[idx])
        for _ in range(abs(k)):
            out = mat_mul(out, m)
    return out


# -- leaf checks -----------------------------------------------------------

def check_invariant_system(curves, k: int) -> dict:
    """Facts showing the multicurve is invariant under rotation by k sectors.

    Each curve image is either a curve of the system (chord-set equality) or
    disjoint from it and cobounding an unmarked annulus with it.
    """
    curves = list(curves)
    for a, b in itertools.combinations(curves, 2):
        if crossing_count(a, b):
            raise CertificateError("multitwist curves must be disjoint")
    images = []
    for c in curves:
        img = c.rotated(k)
        match = [d.name for d in curves if d.same_chords(img)]
        if match:
            images.append({"curve": c.name, "image": match[0], "by": "chords"})
            continue
        iso = [d.name for d in curves
               if crossing_count(d, img) == 0 and isotopic_disjoint(d, img)]
        if not iso:
            raise CertificateError(f"{c.name} is not invariant under alpha^{k}")
        images.append({"curve": c.name, "image": iso[0], "by": "annulus"})
    return {"power": k, "images": images}


def invariant_certificate(curves, k: int) -> MembershipCertificate:
    if k not in (2, 3):
        raise CertificateError("only alpha^2 and alpha^3 centralizers are used")
    curves = list(curves)
    facts = check_invariant_system(curves, k % 6)
    reason = f"alpha{k}-invariant"
    return MembershipCertificate(TwistWord.multitwist(curves), reason, facts=facts, homology_ok=True)


def alpha_certificate() -> MembershipCertificate:
    """The rotation commutes with its own square."""
    return MembershipCertificate(TwistWord.alpha(1), "alpha2-invariant",
                                 facts={"power": 2, "images": [], "rotation": True},
                                 homology_ok=True)


@lru_cache(maxsize=4096)
def _half_turn_isotopic(tuple_str: str, chords) -> bool:
    from .branching import MonodromyTuple

    m = build_model(MonodromyTuple.parse(tuple_str))
    c = ChordalCurve(m, chords)
    img = c.rotated(3)
    return crossing_count(c, img) == 0 and isotopic_disjoint(c, img)


def diameter_certificate(c: ChordalCurve) -> MembershipCertificate:
    """Type r basic curves are isotopic to their half-turn image."""
    if not (c.is_basic and c.kind == "r"):
        raise CertificateError("diameter certificate needs a basic curve of type r")
    if not _half_turn_isotopic(str(c.model.tuple), c.chords):
        raise CertificateError("type r curve is not isotopic to its half-turn image")
    facts = {"power": 3, "images": [{"curve": c.name, "image": c.name, "by": "annulus"}]}
    return MembershipCertificate(TwistWord.twist(c), "diameter-type-r", facts=facts, homology_ok=True)


# -- commutator trick ------------------------------------------------------

def _intersection_fact(a, b) -> dict:
    cert = geometric_intersection(a, b)
    return {"curves": [a.name, b.name], **cert.to_json()}


def commtrick(c: ChordalCurve) -> MembershipCertificate:
    """Twist about a type p basic curve, from a type r curve crossing it once."""
    m = c.model
    if c.kind == "r":
        return diameter_certificate(c)
    if c.kind != "p" or not c.is_basic:
        raise CertificateError("no certificate path")
    if m.genus < 3:
        raise CertificateError("type p configuration needs g >= 3")
    x, y = c.chords[0].start, c.chords[0].end
    e1, _ = m.locate(x)
    e2, _ = m.locate(y)
    c2, c4 = c.rotated(2), c.rotated(4)
    d = None
    n = m.n_edges

    def gap(e):
        return min(min((e - f) % n, (f - e) % n) for f in (e1, e2))

    r_edges = sorted((e for e in range(n) if m.edge(e).side == "A" and m.edge_type(e) == "r"),
                     key=lambda e: (gap(e), e))
    for e in r_edges:
        cand = basic_curve(m, e)
        try:
            if crossing_count(c, cand) != 1:
                continue
            fd = geometric_intersection(c, cand)
            f2 = geometric_intersection(c2, cand)
            f4 = geometric_intersection(c4, cand)
        except CurveError:
            continue
        if fd.value == 1 and f2.value == 0 and f4.value == 0:
            d = cand
            break
    if d is None:
        raise CertificateError("configuration absent")
    dcert = diameter_certificate(d)
    pcert = invariant_certificate([c, c2, c4], 2)
    facts = {"intersections": [_intersection_fact(c, d), _intersection_fact(c2, d),
                               _intersection_fact(c4, d)]}
    cert = MembershipCertificate(TwistWord.twist(c), "commtrick-type-p", (dcert, pcert),
                                 ((0, 1), (1, 1), (0, 1), (1, -1), (0, -1)), facts)
    Tc, Td = TwistWord.twist(c), TwistWord.twist(d)
    P = pcert.subject
    conj_ok = evaluate(P * Td * P.inverse()) == evaluate(Tc * Td * Tc.inverse())
    braid_ok = evaluate(Tc * Td * Tc.inverse()) == evaluate(Td.inverse() * Tc * Td)
    cert.facts["conjugation_shadow"] = conj_ok
    cert.facts["braid_shadow"] = braid_ok
    cert.homology_ok = conj_ok and braid_ok and _derived_matrix(m, cert) == evaluate(Tc)
    return cert


# -- replay ----------------------------------------------------------------

def replay_tree(data: dict, model: PolygonModel):
    """Rebuild a serialized certificate, re-checking it from stored curve data.

    Returns the certificate, or None if any check fails.
    """
    if data.get("reason") not in REASONS:
        return None
    children = []
    for c in data["children"]:
        child = replay_tree(c, model)
        if child is None:
            return None
        children.append(child)
    subject = _word_from_json(model, data["subject"])
    cert = MembershipCertificate(subject, data["reason"], tuple(children),
                                 tuple(tuple(x) for x in data["derivation"]), data["facts"])
    try:
        ok = _check(cert, model)
    except (CertificateError, CurveError, KeyError, IndexError):
        ok = False
    if not ok:
        return None
    cert.homology_ok = True
    return cert


def replay(data: dict, model: PolygonModel) -> bool:
    return replay_tree(data, model) is not None


def _check(cert: MembershipCertificate, model: PolygonModel) -> bool:
    reason, facts = cert.reason, cert.facts
    if not cert.children:
        if reason in ("alpha3-invariant", "alpha2-invariant"):
            if facts.get("rotation"):
                return cert.subject.letters == (("alpha", 1),)
            k = 3 if reason == "alpha3-invariant" else 2
            check_invariant_system(_subject_curves(cert.subject), k)
            return True
        if reason == "diameter-type-r":
            diameter_certificate(_subject_curves(cert.subject)[0])
            return True
        return False
    if reason == "commtrick-type-p":
        named = {c.name: c for c in _all_curves(cert)}
        values = []
        for f in facts["intersections"]:
            a, b = (named[n] for n in f["curves"])
            values.append(geometric_intersection(a, b).value)
        if values != [1, 0, 0] or [f["value"] for f in facts["intersections"]] != values:
            return False
    return _derived_matrix(model, cert) == evaluate(cert.subject, model)


def _all_curves(cert: MembershipCertificate):
    seen = {}
    stack = [cert]
    while stack:
        c = stack.pop()
        for n, cv in c.subject.curves:
            seen[n] = cv
        stack.extend(c.children)
    return list(seen.values())
