"""Chordal curves on the model disk.

A curve is a cyclic sequence of oriented chords; the end of each chord and
the start of the next are the two disk-boundary copies of one surface
point.  Everything is exact: boundary parameters are fractions and chord
crossings are decided by circular interleaving.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .polygon import SECTORS, ModelError, PolygonModel, frac_mod1


class CurveError(ValueError):
    pass


def in_open_arc(x: Fraction, a: Fraction, b: Fraction) -> bool:
    """Whether x lies strictly inside the counterclockwise arc from a to b."""
    return 0 < frac_mod1(x - a) < frac_mod1(b - a)


def interleaved(c0, c1, d0, d1) -> bool:
    return in_open_arc(d0, c0, c1) != in_open_arc(d1, c0, c1)


def circle_point(t: Fraction) -> tuple[Fraction, Fraction]:
    """Exact point on the unit circle, monotone in t (t = 0 maps to (-1, 0))."""
    t = frac_mod1(t)
    if t == 0:
        return Fraction(-1), Fraction(0)
    u = (t - Fraction(1, 2)) / (t - t * t)
    d = 1 + u * u
    # angle 2*arctan(u) runs counterclockwise from -pi to pi as t runs over (0, 1)
    return (1 - u * u) / d, 2 * u / d


@dataclass(frozen=True, order=True)
class Chord:
    start: Fraction
    end: Fraction

    def __post_init__(self):
        object.__setattr__(self, "start", frac_mod1(self.start))
        object.__setattr__(self, "end", frac_mod1(self.end))
        if self.start == self.end:
            raise CurveError("chord endpoints must be distinct")

    def rotated(self, k: int) -> "Chord":
        s = Fraction(k, SECTORS)
        return Chord(self.start + s, self.end + s)

    def reversed(self) -> "Chord":
        return Chord(self.end, self.start)

    @property
    def key(self) -> frozenset:
        return frozenset((self.start, self.end))

    def crosses(self, other: "Chord") -> bool:
        pts = {self.start, self.end, other.start, other.end}
        if len(pts) < 4:
            raise CurveError("degenerate placement")
        return interleaved(self.start, self.end, other.start, other.end)

    def crossing_sign(self, other: "Chord") -> int:
        """+1 if (self, other) is a positively oriented frame at the crossing, else -1."""
        if not self.crosses(other):
            return 0
        # other starts on the left of self iff its start is on the ccw arc end -> start
        return -1 if in_open_arc(other.start, self.end, self.start) else 1


@dataclass(frozen=True)
class ChordalCurve:
    model: PolygonModel
    chords: tuple[Chord, ...]
    name: str = ""
    kind: str = ""  # "p"/"q"/"r" for basic curves, else a free-form tag

    def __post_init__(self):
        if not self.chords:
            raise CurveError("a curve needs at least one chord")
        m = self.model
        n = len(self.chords)
        for i, ch in enumerate(self.chords):
            for t in (ch.start, ch.end):
                _, tau = m.locate(t)
                if tau == 0:
                    raise CurveError("chord endpoints must be interior to edges")
            if m.glue(ch.end) != self.chords[(i + 1) % n].start:
                raise CurveError("not a cycle")
        ends = [t for ch in self.chords for t in (ch.start, ch.end)]
        if len(set(ends)) != len(ends):
            raise CurveError("curve is not embedded")
        for a, b in itertools.combinations(self.chords, 2):
            if a.crosses(b):
                raise CurveError("curve is not embedded")

    # -- basic data -----------------------------------------------------
    @property
    def is_basic(self) -> bool:
        return len(self.chords) == 1

    @cached_property
    def chord_set(self) -> frozenset:
        return frozenset(ch.key for ch in self.chords)

    @property
    def endpoints(self) -> list[Fraction]:
        return [t for ch in self.chords for t in (ch.start, ch.end)]

    def rotated(self, k: int) -> "ChordalCurve":
        name = f"a^{k % SECTORS}({self.name})" if self.name and k % SECTORS else self.name
        return ChordalCurve(self.model, tuple(ch.rotated(k) for ch in self.chords),
                            name, self.kind)

    def reversed(self) -> "ChordalCurve":
        return ChordalCurve(self.model, tuple(ch.reversed() for ch in reversed(self.chords)),
                            self.name, self.kind)

    def same_chords(self, other: "ChordalCurve") -> bool:
        return self.chord_set == other.chord_set

    def renamed(self, name: str) -> "ChordalCurve":
        return ChordalCurve(self.model, self.chords, name, self.kind)

    def crossing_cochain(self) -> dict[int, int]:
        """Signed crossings with each surface edge (keyed by its smaller D-edge index)."""
        m = self.model
        out: dict[int, int] = {}
        for ch in self.chords:
            e, _ = m.locate(ch.end)
            f = m.partner(e)
            key, sign = (e, 1) if e < f else (f, -1)
            out[key] = out.get(key, 0) + sign
        return {k: v for k, v in out.items() if v}

    def surface_crossings(self) -> dict[int, list[Fraction]]:
        """Crossing points on each surface edge, as offsets on its canonical side."""
        m = self.model
        out: dict[int, list[Fraction]] = {}
        for ch in self.chords:
            e, tau = m.locate(ch.end)
            f = m.partner(e)
            key, off = (e, tau) if e < f else (f, 1 - tau)
            out.setdefault(key, []).append(off)
        return {k: sorted(v) for k, v in out.items()}

    def moved(self, offsets: dict[tuple[int, Fraction], Fraction]) -> "ChordalCurve":
        """Slide crossing points along their surface edges (an isotopy if order is kept)."""
        m = self.model

        def move(t):
            e, tau = m.locate(t)
            f = m.partner(e)
            if e < f:
                new = offsets.get((e, tau), tau)
                return m.point_on_edge(e, new)
            new = offsets.get((f, 1 - tau), 1 - tau)
            return m.point_on_edge(e, 1 - new)

        return ChordalCurve(m, tuple(Chord(move(ch.start), move(ch.end)) for ch in self.chords),
                            self.name, self.kind)

    def parallel_copy(self, delta=Fraction(1, 1000)) -> "ChordalCurve":
        offs = {(k, tau): tau + delta
                for k, taus in self.surface_crossings().items() for tau in taus}
        for (_, tau), new in offs.items():
            if not 0 < new < 1:
                raise CurveError("parallel copy leaves the edge")
        return self.moved(offs)

    def to_json(self) -> dict:
        return {"name": self.name, "kind": self.kind,
                "chords": [[str(ch.start), str(ch.end)] for ch in self.chords]}

    @classmethod
    def from_json(cls, model: PolygonModel, data: dict) -> "ChordalCurve":
        chords = tuple(Chord(Fraction(a), Fraction(b)) for a, b in data["chords"])
        return cls(model, chords, data.get("name", ""), data.get("kind", ""))


# -- constructors ---------------------------------------------------------

def basic_curve(m: PolygonModel, e: int, tau=Fraction(1, 2), name: str = "") -> ChordalCurve:
    """The single chord joining edge e to its partner."""
    x = m.point_on_edge(e, tau)
    return ChordalCurve(m, (Chord(x, m.glue(x)),), name or m.edge(e).label, m.edge_type(e))


def invariant_curve(m: PolygonModel, x: Fraction, k: int, name: str = "") -> ChordalCurve:
    """The alpha^k-invariant curve through x built from 6/k rotated copies of one chord."""
    first = Chord(x, m.glue(frac_mod1(x + Fraction(k, SECTORS))))
    chords = tuple(first.rotated(i * k) for i in range(SECTORS // k))
    return ChordalCurve(m, chords, name, f"inv{k}")


def basic_chordal_curves(m: PolygonModel, types: str = "pqr") -> list[ChordalCurve]:
    """One basic curve per identified edge pair (oriented from its A edge)."""
    out = []
    for e in range(m.n_edges):
        if m.edge(e).side == "A" and m.edge_type(e) in types:
            out.append(basic_curve(m, e))
    return out


def curve_family(m: PolygonModel) -> list[ChordalCurve]:
    """The basic curves of type p and r."""
    return basic_chordal_curves(m, "pr")


# -- intersections -------------------------------------------------------

def crossing_count(c: ChordalCurve, d: ChordalCurve) -> int:
    return sum(a.crosses(b) for a in c.chords for b in d.chords)


def algebraic_crossings(c: ChordalCurve, d: ChordalCurve) -> int:
    return sum(a.crossing_sign(b) for a in c.chords for b in d.chords)


def _interleavings(a: int, b: int):
    """All ways to merge a points of one curve with b of another, as 0/1 sequences."""
    for pos in itertools.combinations(range(a + b), a):
        seq = [1] * (a + b)
        for p in pos:
            seq[p] = 0
        yield tuple(seq)


@dataclass(frozen=True)
class IntersectionCertificate:
    upper: int
    lower: int
    placement: tuple  # chosen merge order per shared surface edge
    realized: tuple  # the two curves at the chosen placement
    truncated: bool = False
    bigon: tuple | None = None  # crossing pairs and arc directions of a removable bigon

    @property
    def value(self) -> int | None:
        return self.upper if self.upper == self.lower else None

    @property
    def certified(self) -> bool:
        return self.value is not None

    def to_json(self) -> dict:
        return {"upper": self.upper, "lower": self.lower, "value": self.value,
                "placement": [[k, list(seq)] for k, seq in self.placement],
                "truncated": self.truncated,
                "bigon": None if self.bigon is None else [list(self.bigon[0]), list(self.bigon[1]),
                                                         self.bigon[2], self.bigon[3]]}


def best_placement(c: ChordalCurve, d: ChordalCurve, limit: int = 20000):
    """Minimise chord crossings over the relative orders of shared edge crossings.

    Returns (count, placement, c', d', truncated).  The search is exhaustive
    over combinatorial classes unless their number exceeds ``limit``.
    """
    cc, dc = c.surface_crossings(), d.surface_crossings()
    shared = sorted(set(cc) & set(dc))
    choices = [list(_interleavings(len(cc[k]), len(dc[k]))) for k in shared]
    total = 1
    for ch in choices:
        total *= len(ch)
    truncated = total > limit
    best = None
    combos = itertools.product(*choices) if not truncated else [tuple(ch[0] for ch in choices)]
    for combo in combos:
        offc, offd = {}, {}
        for k, seq in zip(shared, combo):
            n = len(seq)
            ic = iter(cc[k])
            idd = iter(dc[k])
            for rank, who in enumerate(seq):
                new = Fraction(rank + 1, n + 1)
                if who == 0:
                    offc[(k, next(ic))] = new
                else:
                    offd[(k, next(idd))] = new
        c2, d2 = c.moved(offc), d.moved(offd)
        n_cross = crossing_count(c2, d2)
        if best is None or n_cross < best[0]:
            best = (n_cross, tuple(zip(shared, combo)), c2, d2)
            if n_cross == 0:
                break
    return best[0], best[1], best[2], best[3], truncated


def _arc(c: ChordalCurve, i: int, j: int, forward: bool) -> tuple[list[Fraction], list[int]]:
    """Boundary points crossed, and chords used, running along c from chord i to chord j."""
    n = len(c.chords)
    exits, used = [], [i]
    k = i
    while k != j:
        ch = c.chords[k]
        exits.append(ch.end if forward else ch.start)
        k = (k + 1) % n if forward else (k - 1) % n
        used.append(k)
    return exits, used


def bigon_loops(c: ChordalCurve, d: ChordalCurve):
    """Loops made of one arc of c and one arc of d between two crossing points.

    Only arcs whose chords cross nowhere except at the two corners, and whose
    corners lie on four distinct chords, are used; smoothing the corners then
    gives a curve isotopic to the loop.
    """
    m = c.model
    pts = [(i, k) for i, a in enumerate(c.chords) for k, b in enumerate(d.chords) if a.crosses(b)]
    for (i, k), (j, l) in itertools.combinations(pts, 2):
        if i == j or k == l:
            continue
        for fc, fd in itertools.product((True, False), repeat=2):
            ec, uc = _arc(c, i, j, fc)
            ed, ud = _arc(d, l, k, fd)
            if {(x, y) for x, y in pts if x in uc and y in ud} != {(i, k), (j, l)}:
                continue
            exits = ec + ed
            chords = [Chord(m.glue(exits[x - 1]), exits[x]) for x in range(len(exits))]
            try:
                yield ((i, k), (j, l), fc, fd), ChordalCurve(m, tuple(chords), "bigon", "loop")
            except CurveError:
                continue


def find_bigon(c: ChordalCurve, d: ChordalCurve):
    from .subsurface import bounds_disk

    for key, loop in bigon_loops(c, d):
        if bounds_disk(loop):
            return key
    return None


def geometric_intersection(c: ChordalCurve, d: ChordalCurve) -> IntersectionCertificate:
    """Exact when the best placement meets the homological bound, or misses it
    by two and an unmarked bigon shows one pair of crossings is removable."""
    from .homrep import homology

    if c.model is not d.model and c.model != d.model:
        raise CurveError("curves live on different models")
    if c.same_chords(d):
        d = d.parallel_copy()
    upper, placement, c2, d2, truncated = best_placement(c, d)
    h = homology(c.model)
    lower = abs(h.pairing(h.curve_class(c), h.curve_class(d)))
    if lower > upper:
        raise AssertionError("intersection bounds inconsistent")
    bigon = None
    if upper - lower == 2:
        bigon = find_bigon(c2, d2)
        if bigon is not None:
            upper -= 2
    return IntersectionCertificate(upper, lower, placement, (c2, d2), truncated, bigon)


def check_disjoint_family(curves) -> bool:
    return all(geometric_intersection(a, b).value == 0
               for a, b in itertools.combinations(curves, 2))
