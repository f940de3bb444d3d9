"""Subsurfaces cut out by chords, D-convex hulls and stabilizations.

The workhorse is :func:`cut`: a family of pairwise non-crossing chords
splits the disk into faces; gluing the faces along the paired boundary
pieces yields the surface cut open along the chords.  Each connected
piece is reported with its Euler characteristic, boundary circles, genus
and whether it holds the marked point.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .curves import Chord, ChordalCurve, CurveError, circle_point, in_open_arc
from .polygon import PolygonModel, _UnionFind, frac_mod1


class SubsurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class Piece:
    """A connected component of the surface cut along chords."""

    faces: tuple[int, ...]
    euler: int
    boundary: tuple[tuple[int, ...], ...]  # boundary circles as chord-side ids
    marked: bool
    full_edges: int  # whole disk edges lying in the piece

    @property
    def n_boundary(self) -> int:
        return len(self.boundary)

    @property
    def genus(self) -> int:
        return (2 - self.euler - self.n_boundary) // 2

    @property
    def is_disk(self) -> bool:
        return self.euler == 1 and self.n_boundary == 1

    @property
    def is_annulus(self) -> bool:
        return self.euler == 0 and self.n_boundary == 2

    def invariants(self) -> tuple[int, int, bool]:
        return self.genus, self.n_boundary, self.marked


@dataclass
class Cut:
    model: PolygonModel
    chords: tuple[Chord, ...]
    atoms: list[Fraction] = field(default_factory=list)
    face_of_segment: list[int] = field(default_factory=list)
    faces: list[list[int]] = field(default_factory=list)
    pieces: list[Piece] = field(default_factory=list)
    piece_of_face: dict[int, int] = field(default_factory=dict)
    side_circle: dict[int, int] = field(default_factory=dict)

    def piece_at(self, t) -> int:
        """Piece containing the boundary point t (which must not be an atom)."""
        t = frac_mod1(t)
        i = self._segment_at(t)
        return self.piece_of_face[self.face_of_segment[i]]

    def _segment_at(self, t) -> int:
        i = bisect.bisect_right(self.atoms, t) - 1
        if self.atoms[i % len(self.atoms)] == t:
            raise SubsurfaceError("point lies on an atom")
        return i % len(self.atoms)


def cut(model: PolygonModel, chords) -> Cut:
    chords = tuple(chords)
    n_edges = model.n_edges
    # work in integer coordinates: the boundary circle has length L
    L = n_edges
    for ch in chords:
        L = math.lcm(L, ch.start.denominator, ch.end.denominator)
    W = L // n_edges

    def to_int(t):
        return t.numerator * (L // t.denominator)

    def glue(x):
        e, tau = divmod(x, W)
        return model.partner(e) * W + W - tau

    ints = [(to_int(ch.start), to_int(ch.end)) for ch in chords]
    ends = {}
    for k, pair in enumerate(ints):
        for side, x in enumerate(pair):
            if x in ends:
                raise CurveError("degenerate placement")
            if x % W == 0:
                raise CurveError("chord endpoint on a vertex")
            ends[x] = (k, side)
    # non-crossing chords nest like parentheses in circular order
    stack = []
    for x in sorted(ends):
        k = ends[x][0]
        if stack and stack[-1] == k:
            stack.pop()
        else:
            stack.append(k)
    if stack:
        raise SubsurfaceError("chords must be pairwise disjoint")
    marks = set(ends)
    marks.update(glue(x) for x in ends)
    marks.update(range(0, L, W))
    atoms_int = sorted(marks)
    index = {x: i for i, x in enumerate(atoms_int)}
    na = len(atoms_int)

    # faces: walk counterclockwise, jumping along chords at chord endpoints
    def next_segment(i):
        x = atoms_int[(i + 1) % na]
        if x in ends:
            k, side = ends[x]
            return index[ints[k][1 - side]]
        return (i + 1) % na

    face_of = [-1] * na
    faces: list[list[int]] = []
    for i in range(na):
        if face_of[i] >= 0:
            continue
        cyc = []
        j = i
        while face_of[j] < 0:
            face_of[j] = len(faces)
            cyc.append(j)
            j = next_segment(j)
        faces.append(cyc)

    # occurrences of atoms: vertices and marks have one, chord ends have two
    occ_in, occ_out = [0] * na, [0] * na
    n_occ = 0
    for i, x in enumerate(atoms_int):
        occ_in[i] = n_occ
        if x in ends:
            n_occ += 1
        occ_out[i] = n_occ
        n_occ += 1
    uf = _UnionFind(n_occ)
    face_uf = _UnionFind(len(faces))
    full_edge = [False] * na
    for i in range(na):
        a = atoms_int[i]
        b = atoms_int[i + 1] if i + 1 < na else L
        e, ta = divmod(a, W)
        tb = b - e * W
        full_edge[i] = ta == 0 and tb == W
        f = model.partner(e)
        # the partner segment runs from the image of b to the image of a
        pa = (f * W + W - ta) % L
        pb = (f * W + W - tb) % L
        j = index[pb]
        uf.union(occ_out[i], occ_in[index[pa]])
        uf.union(occ_in[(i + 1) % na], occ_out[j])
        face_uf.union(face_of[i], face_of[j])
    atoms = [Fraction(x, L) for x in atoms_int]
    index = {t: i for i, t in enumerate(atoms)}

    # chord sides: side 0 runs in(start) -> out(end), side 1 runs in(end) -> out(start)
    sides = []
    for ch in chords:
        s, e = index[ch.start], index[ch.end]
        sides.append((uf.find(occ_in[s]), uf.find(occ_out[e]), face_of[(s - 1) % na]))
        sides.append((uf.find(occ_in[e]), uf.find(occ_out[s]), face_of[(e - 1) % na]))
    circ_uf = _UnionFind(len(sides))
    by_vertex: dict[int, list[int]] = {}
    for k, (u, v, _) in enumerate(sides):
        by_vertex.setdefault(u, []).append(k)
        by_vertex.setdefault(v, []).append(k)
    for v, ks in by_vertex.items():
        if len(ks) != 2:
            raise SubsurfaceError("chord system is not a union of closed curves")
        circ_uf.union(*ks)

    marked_occ = uf.find(occ_out[index[model.marked_point]])
    comp: dict[int, list[int]] = {}
    for fi in range(len(faces)):
        comp.setdefault(face_uf.find(fi), []).append(fi)
    out = Cut(model, chords, atoms, face_of, faces)
    vertex_piece: dict[int, int] = {}
    for pi, (root, fis) in enumerate(sorted(comp.items())):
        for fi in fis:
            out.piece_of_face[fi] = pi
    for i in range(na):
        pi = out.piece_of_face[face_of[i]]
        vertex_piece[uf.find(occ_out[i])] = pi
        vertex_piece[uf.find(occ_in[(i + 1) % na])] = pi
    for pi, (root, fis) in enumerate(sorted(comp.items())):
        fset = set(fis)
        segs = [i for i in range(na) if face_of[i] in fset]
        # every segment is glued to exactly one other, possibly in the same face
        n_seg_cells = len(segs) // 2
        verts = {v for v, p in vertex_piece.items() if p == pi}
        my_sides = [k for k, sd in enumerate(sides) if sd[2] in fset]
        circles: dict[int, list[int]] = {}
        for k in my_sides:
            circles.setdefault(circ_uf.find(k), []).append(k)
        euler = len(verts) - (n_seg_cells + len(my_sides)) + len(fis)
        full = sum(1 for i in segs if full_edge[i])
        piece = Piece(tuple(sorted(fis)), euler,
                      tuple(tuple(sorted(v)) for _, v in sorted(circles.items())),
                      marked_occ in verts, full // 2)
        if (2 - piece.euler - piece.n_boundary) % 2 or piece.genus < 0:
            raise SubsurfaceError("invalid subsurface")
        out.pieces.append(piece)
        for cid, ks in circles.items():
            for k in ks:
                out.side_circle[k] = cid
    total = sum(p.euler for p in out.pieces)
    if total != 2 - 2 * model.genus:
        raise AssertionError("cut pieces do not reassemble the surface")
    return out


# -- D-convex hulls -------------------------------------------------------

@dataclass(frozen=True)
class Subsurface:
    """A D-convex subsurface: projected convex hull plus filled disks."""

    model: PolygonModel
    curves: tuple[ChordalCurve, ...]
    hull_chords: tuple[Chord, ...]
    polygon: Piece
    filled: tuple[Piece, ...]
    unfilled: tuple[Piece, ...]
    cutting: Cut = field(compare=False, repr=False)

    @property
    def euler(self) -> int:
        return self.polygon.euler + sum(p.euler for p in self.filled)

    @property
    def n_boundary(self) -> int:
        return self.polygon.n_boundary - sum(p.n_boundary for p in self.filled)

    @property
    def genus(self) -> int:
        return (2 - self.euler - self.n_boundary) // 2

    @property
    def marked(self) -> bool:
        return self.polygon.marked or any(p.marked for p in self.filled)

    def invariants(self) -> tuple[int, int, bool]:
        return self.genus, self.n_boundary, self.marked

    @property
    def residual_filled(self) -> int:
        """Filled disks that contain whole disk edges (not just corners)."""
        return sum(1 for p in self.filled if p.full_edges)

    @cached_property
    def endpoints(self) -> frozenset:
        return frozenset(t for c in self.curves for t in c.endpoints)

    def contains_point(self, t) -> bool:
        t = frac_mod1(t)
        if t in self.endpoints:
            return True
        pi = self.cutting.piece_at(t)
        piece = self.cutting.pieces[pi]
        return piece is self.polygon or piece in self.filled

    def to_json(self) -> dict:
        g, b, x = self.invariants()
        return {"curves": [c.name for c in self.curves], "genus": g, "boundary": b,
                "marked": x, "filled": len(self.filled), "residual_filled": self.residual_filled}


def hull_chords(model: PolygonModel, endpoints) -> tuple[Chord, ...]:
    pts = sorted(set(frac_mod1(t) for t in endpoints))
    if len(pts) < 2:
        raise SubsurfaceError("hull needs at least one chord")
    n = model.n_edges
    marks = sorted(set(pts) | {Fraction(k, n) for k in range(n)})
    eps = min(b - a for a, b in zip(marks, marks[1:] + [marks[0] + 1])) / 4
    k = len(pts)
    return tuple(Chord(pts[i] + eps, pts[(i + 1) % k] - eps) for i in range(k))


def d_convex_hull(model: PolygonModel, curves, fill: bool = True) -> Subsurface:
    curves = tuple(curves)
    if not curves:
        raise SubsurfaceError("curves must be nonempty")
    ends = {t for c in curves for t in c.endpoints}
    sides = hull_chords(model, ends)
    cu = cut(model, sides)
    anchor = min(ends)
    pi = cu.piece_at(anchor)
    polygon = cu.pieces[pi]
    others = [p for k, p in enumerate(cu.pieces) if k != pi]
    filled = tuple(p for p in others if fill and p.is_disk)
    unfilled = tuple(p for p in others if p not in filled)
    return Subsurface(model, curves, sides, polygon, filled, unfilled, cu)


def subsurface_invariants(S) -> tuple[int, int, bool]:
    return S.invariants()


# -- regular neighbourhoods of crossing curve systems ----------------------

def _crossing_point(a: Chord, b: Chord):
    (x1, y1), (x2, y2) = circle_point(a.start), circle_point(a.end)
    (x3, y3), (x4, y4) = circle_point(b.start), circle_point(b.end)
    den = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
    s = ((x1 - x3) * (y3 - y4) - (y1 - y3) * (x3 - x4)) / den
    return s  # position along a, in (0, 1)


@dataclass(frozen=True)
class Neighbourhood:
    euler: int
    n_boundary: int
    components: int
    marked: bool = False

    @property
    def genus(self) -> int:
        return (2 * self.components - self.euler - self.n_boundary) // 2

    def invariants(self) -> tuple[int, int, bool]:
        return self.genus, self.n_boundary, self.marked


def regular_neighbourhood(curves) -> Neighbourhood:
    """Invariants of a regular neighbourhood of a union of curves in minimal position.

    The union is a 4-valent ribbon graph whose rotation system comes from the
    disk orientation; boundary circles are its faces.
    """
    curves = list(curves)
    chords = [(ci, k, ch) for ci, c in enumerate(curves) for k, ch in enumerate(c.chords)]
    # crossings along each chord, sorted by position
    along: dict[tuple[int, int], list[tuple[Fraction, int]]] = {}
    vertices = []
    for (ci, ki, a), (cj, kj, b) in itertools.combinations(chords, 2):
        if ci == cj:
            continue
        if a.crosses(b):
            v = len(vertices)
            vertices.append(((ci, ki), (cj, kj), a.crossing_sign(b)))
            along.setdefault((ci, ki), []).append((_crossing_point(a, b), v))
            along.setdefault((cj, kj), []).append((_crossing_point(b, a), v))
    # darts: (vertex, chord key, direction) ; traverse each curve to link darts
    # dart (v, key, +1) leaves v forwards along the curve, (v, key, -1) backwards
    succ = {}  # forward dart -> backward dart at the next vertex along the curve
    free_circles = 0
    components_uf = _UnionFind(max(len(vertices), 1))
    for ci, c in enumerate(curves):
        seq = []
        for k in range(len(c.chords)):
            pts = sorted(along.get((ci, k), []))
            seq += [(v, (ci, k)) for _, v in pts]
        if not seq:
            free_circles += 1
            continue
        for idx, (v, key) in enumerate(seq):
            w, key2 = seq[(idx + 1) % len(seq)]
            succ[(v, key, 1)] = (w, key2, -1)
            succ[(w, key2, -1)] = (v, key, 1)
            components_uf.union(v, w)
    # rotation at each vertex (counterclockwise)
    rot = {}
    for v, (ka, kb, sign) in enumerate(vertices):
        if sign > 0:  # b crosses a from right to left
            order = [(v, ka, 1), (v, kb, 1), (v, ka, -1), (v, kb, -1)]
        else:
            order = [(v, ka, 1), (v, kb, -1), (v, ka, -1), (v, kb, 1)]
        for i, d in enumerate(order):
            rot[d] = order[(i + 1) % 4]
    faces = 0
    seen = set()
    for d in rot:
        if d in seen:
            continue
        faces += 1
        x = d
        while x not in seen:
            seen.add(x)
            x = rot[succ[x]]
    V = len(vertices)
    E = 2 * V
    comps = len({components_uf.find(v) for v in range(V)}) if V else 0
    return Neighbourhood(V - E, faces + 2 * free_circles, comps + free_circles)


# -- stabilization --------------------------------------------------------

@dataclass(frozen=True)
class Stabilization:
    kind: str  # "same-boundary", "distinct-boundary" or "not-a-stabilization"
    before: tuple[int, int, bool]
    predicted: tuple[int, int, bool] | None
    banded: tuple[int, int, bool] | None  # hull of S and c before new disks are filled
    after: Subsurface | None
    new_fills: int = 0

    @property
    def verified(self) -> bool:
        return self.kind == "not-a-stabilization" or self.predicted == self.banded

    def to_json(self) -> dict:
        return {"kind": self.kind, "before": list(self.before),
                "predicted": list(self.predicted) if self.predicted else None,
                "banded": list(self.banded) if self.banded else None,
                "after": list(self.after.invariants()) if self.after else None,
                "new_fills": self.new_fills, "verified": self.verified}


class NoStabilizationNeeded(SubsurfaceError):
    pass


def _piece_signature(cu: Cut, piece: Piece) -> frozenset:
    return frozenset((cu.atoms[i], cu.atoms[(i + 1) % len(cu.atoms)])
                     for fi in piece.faces for i in cu.faces[fi])


def is_stabilization(S: Subsurface, c: ChordalCurve) -> Stabilization:
    """Classify how the basic curve c meets the D-convex subsurface S."""
    if not c.is_basic:
        raise SubsurfaceError("stabilizing curve must be basic")
    x, y = c.chords[0].start, c.chords[0].end
    before = S.invariants()
    if S.contains_point(x):
        raise NoStabilizationNeeded("no stabilization needed")
    cu = S.cutting
    sx, sy = cu._segment_at(x), cu._segment_at(y)
    fx, fy = cu.face_of_segment[sx], cu.face_of_segment[sy]
    if fx == fy:
        return Stabilization("not-a-stabilization", before, None, None, None)
    # the free side bounding the cap of each endpoint
    side_x = _cap_side(cu, fx)
    side_y = _cap_side(cu, fy)
    same = cu.side_circle[side_x] == cu.side_circle[side_y]
    g, b, mk = before
    kind = "same-boundary" if same else "distinct-boundary"
    predicted = (g, b + 1, mk) if same else (g + 1, b - 1, mk)
    after = d_convex_hull(S.model, S.curves + (c,))
    old = {_piece_signature(cu, p) for p in S.filled}
    keep = [p for p in after.filled if _piece_signature(after.cutting, p) in old]
    new = [p for p in after.filled if _piece_signature(after.cutting, p) not in old]
    euler = after.polygon.euler + sum(p.euler for p in keep)
    nb = after.polygon.n_boundary - sum(p.n_boundary for p in keep)
    banded = ((2 - euler - nb) // 2, nb, after.polygon.marked or any(p.marked for p in keep))
    return Stabilization(kind, before, predicted, banded, after, len(new))


def _cap_side(cu: Cut, face: int) -> int:
    """Chord-side id of the unique hull side bounding a cap face."""
    segs = set(cu.faces[face])
    where = {t: i for i, t in enumerate(cu.atoms)}
    na = len(cu.atoms)
    for k, ch in enumerate(cu.chords):
        s = where[ch.start]
        e = where[ch.end]
        if (s - 1) % na in segs:
            return 2 * k
        if (e - 1) % na in segs:
            return 2 * k + 1
    raise SubsurfaceError("face has no free side")


def isotopic_disjoint(c: ChordalCurve, d: ChordalCurve) -> bool:
    """Disjoint curves are isotopic iff they cobound an annulus avoiding the marked point."""
    cu = cut(c.model, c.chords + d.chords)
    nc = len(c.chords)
    for p in cu.pieces:
        if p.is_annulus and not p.marked:
            owners = []
            for circle in p.boundary:
                owners.append({(k // 2) < nc for k in circle})
            if owners[0] != owners[1] and all(len(o) == 1 for o in owners):
                return True
    return False


def bounds_pants(curves) -> bool:
    """Whether the disjoint curves (three of them) cobound a pair of pants without the marked point."""
    curves = list(curves)
    chords = tuple(ch for c in curves for ch in c.chords)
    owner = [i for i, c in enumerate(curves) for _ in c.chords]
    cu = cut(curves[0].model, chords)
    for p in cu.pieces:
        if p.genus == 0 and p.n_boundary == len(curves) and not p.marked:
            got = set()
            for circle in p.boundary:
                own = {owner[k // 2] for k in circle}
                if len(own) != 1:
                    break
                got |= own
            else:
                if got == set(range(len(curves))):
                    return True
    return False


def bounds_disk(c: ChordalCurve) -> bool:
    """Whether the curve bounds a disk avoiding the marked point."""
    cu = cut(c.model, c.chords)
    return any(p.is_disk and not p.marked for p in cu.pieces)
