"""The model surface as a disk with paired boundary edges.

The base sphere is slit from a regular basepoint P to each branch point
b_2..b_n (in tuple order).  The complement of the slits is a disk around
b_1; its six-fold cover branched at b_1 is the model disk D, with the
deck rotation acting by a sixth of a turn.  Sector ``s`` of the boundary
carries, for each slit ``j``, an edge ``A`` (from a lift of P to a lift of
b_j) followed by an edge ``B`` (back to P).  Crossing slit ``j`` shifts
the sheet by its monodromy ``m_j``, so ``A(s, j)`` is glued to
``B(s + m_j, j)`` reversing orientation.

Boundary parameters are exact fractions in [0, 1); edge ``e`` spans
``[e/N, (e+1)/N]`` and D-vertex ``k`` sits at ``k/N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .branching import (
    MonodromyTuple,
    element_order,
    fixed_point_count,
    genus_of,
)

SECTORS = 6
TYPE_OF_ORDER = {6: "p", 3: "q", 2: "r"}


class ModelError(ValueError):
    pass


def frac_mod1(x) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class Edge:
    index: int
    sector: int
    slit: int
    side: str  # "A" runs P -> b_j, "B" runs b_j -> P

    @property
    def label(self) -> str:
        return f"{self.side}{self.slit + 1}.{self.sector}"


@dataclass(frozen=True)
class VertexClass:
    """A point of the quotient lying on the image of the disk boundary."""

    members: tuple[int, ...]  # D-vertex indices
    stabilizer: int  # order of the stabilizer in Z/6
    slit: int | None  # branch point b_{slit+2}, or None for lifts of P


@dataclass(frozen=True)
class QuotientInvariants:
    euler: int
    genus: int
    vertex_orbits: int
    profile: dict  # stabilizer order -> number of orbits (including the centre)


@dataclass(frozen=True)
class PolygonModel:
    tuple: MonodromyTuple

    # -- combinatorics -------------------------------------------------
    @property
    def slit_monodromies(self) -> tuple[int, ...]:
        return self.tuple.entries[1:]

    @property
    def per_sector(self) -> int:
        return 2 * len(self.slit_monodromies)

    @property
    def n_edges(self) -> int:
        return SECTORS * self.per_sector

    @property
    def genus(self) -> int:
        return genus_of(self.tuple)

    def edge(self, e: int) -> Edge:
        e %= self.n_edges
        s, rem = divmod(e, self.per_sector)
        return Edge(e, s, rem // 2, "AB"[rem % 2])

    def edge_index(self, sector: int, slit: int, side: str) -> int:
        return (sector % SECTORS) * self.per_sector + 2 * slit + (0 if side == "A" else 1)

    @cached_property
    def pairing(self) -> tuple[int, ...]:
        out = [0] * self.n_edges
        for e in range(self.n_edges):
            ed = self.edge(e)
            m = self.slit_monodromies[ed.slit]
            if ed.side == "A":
                out[e] = self.edge_index(ed.sector + m, ed.slit, "B")
            else:
                out[e] = self.edge_index(ed.sector - m, ed.slit, "A")
        return tuple(out)

    def partner(self, e: int) -> int:
        return self.pairing[e % self.n_edges]

    def rotate_edge(self, e: int, k: int = 1) -> int:
        return (e + k * self.per_sector) % self.n_edges

    def edge_interval(self, e: int) -> tuple[Fraction, Fraction]:
        return Fraction(e, self.n_edges), Fraction(e + 1, self.n_edges)

    def point_on_edge(self, e: int, tau) -> Fraction:
        return Fraction(e % self.n_edges + Fraction(tau), self.n_edges)

    def locate(self, t) -> tuple[int, Fraction]:
        """Edge index and local offset in [0, 1) of boundary parameter t."""
        x = frac_mod1(t) * self.n_edges
        e = x.numerator // x.denominator
        return e, x - e

    def glue(self, t) -> Fraction:
        """The other copy on the disk boundary of the surface point at t."""
        e, tau = self.locate(t)
        if tau == 0:
            raise ModelError("vertices are not glued pointwise")
        return self.point_on_edge(self.partner(e), 1 - tau)

    # -- vertices -------------------------------------------------------
    @cached_property
    def _vertex_uf(self) -> _UnionFind:
        n = self.n_edges
        uf = _UnionFind(n)
        for e in range(n):
            f = self.pairing[e]
            if self.pairing[f] != e or f == e:
                raise ModelError("invalid pairing")
            if self.edge(e).side == self.edge(f).side:
                raise ModelError("invalid pairing")
            # orientation reversing: tail(e) ~ head(f)
            uf.union(e, (f + 1) % n)
        return uf

    @cached_property
    def vertex_classes(self) -> tuple[VertexClass, ...]:
        n = self.n_edges
        groups: dict[int, list[int]] = {}
        for k in range(n):
            groups.setdefault(self._vertex_uf.find(k), []).append(k)
        out = []
        for members in sorted(groups.values()):
            mset = set(members)
            stab = sum(1 for k in range(SECTORS)
                       if {(v + k * self.per_sector) % n for v in members} == mset)
            rem = members[0] % self.per_sector
            slit = rem // 2 if rem % 2 else None
            out.append(VertexClass(tuple(members), stab, slit))
        return tuple(out)

    def vertex_class_of(self, k: int) -> int:
        root = self._vertex_uf.find(k % self.n_edges)
        for i, vc in enumerate(self.vertex_classes):
            if self._vertex_uf.find(vc.members[0]) == root:
                return i
        raise AssertionError

    @property
    def marked_vertex(self) -> int:
        """D-vertex index of the marked point: the lift of b_2 in sector 0."""
        return 1

    @property
    def marked_point(self) -> Fraction:
        return Fraction(self.marked_vertex, self.n_edges)

    @property
    def marked_class(self) -> int:
        return self.vertex_class_of(self.marked_vertex)

    # -- queries --------------------------------------------------------
    def edge_type(self, e: int) -> str:
        n = self.n_edges
        ramified = [self.vertex_classes[self.vertex_class_of(v)].stabilizer > 1
                    for v in (e % n, (e + 1) % n)]
        if sum(ramified) != 1:
            raise ModelError("model malformed")
        v = e % n if ramified[0] else (e + 1) % n
        return TYPE_OF_ORDER[self.vertex_classes[self.vertex_class_of(v)].stabilizer]

    def quotient_invariants(self) -> QuotientInvariants:
        V = len(self.vertex_classes)
        E = self.n_edges // 2
        chi = V - E + 1
        if chi % 2:
            raise ModelError("invalid pairing")
        orbits = {6: 1, 3: 0, 2: 0, 1: 0}  # the centre covers b_1
        seen = set()
        for i, vc in enumerate(self.vertex_classes):
            if i in seen:
                continue
            orbit = {self.vertex_class_of(vc.members[0] + k * self.per_sector)
                     for k in range(SECTORS)}
            seen |= orbit
            orbits[vc.stabilizer] += 1
        return QuotientInvariants(chi, (2 - chi) // 2, sum(orbits.values()), orbits)

    def fixed_points(self, power: int) -> int:
        """Fixed points of alpha^power on the quotient, by enumeration."""
        shift = power * self.per_sector
        n = self.n_edges
        count = 1  # the centre of D
        for vc in self.vertex_classes:
            if {(v + shift) % n for v in vc.members} == set(vc.members):
                count += 1
        # points interior to edges: an A edge never rotates onto a B edge
        for e in range(n):
            if self.rotate_edge(e, power) == e:
                count += 1
        return count

    def check(self) -> None:
        """Self-check of the construction; raises ModelError on failure."""
        n = self.n_edges
        for e in range(n):
            for k in range(SECTORS):
                if self.partner(self.rotate_edge(e, k)) != self.rotate_edge(self.partner(e), k):
                    raise ModelError("construction self-check failed: pairing not equivariant")
        if self.quotient_invariants().genus != self.genus:
            raise ModelError("construction self-check failed: genus mismatch")
        for vc in self.vertex_classes:
            want = 1 if vc.slit is None else element_order(self.slit_monodromies[vc.slit])
            if vc.stabilizer != want:
                raise ModelError("construction self-check failed: ramification mismatch")
        if self.vertex_classes[self.marked_class].stabilizer != SECTORS:
            raise ModelError("construction self-check failed: marked point not fixed")
        for j in (1, 2, 3):
            if self.fixed_points(j) != fixed_point_count(self.tuple, j):
                raise ModelError("construction self-check failed: fixed points")

    def to_json(self) -> dict:
        return {
            "tuple": str(self.tuple),
            "edges": [
                {"label": self.edge(e).label,
                 "interval": [str(x) for x in self.edge_interval(e)],
                 "type": self.edge_type(e)}
                for e in range(self.n_edges)
            ],
            "pairing": list(self.pairing),
            "marked_point": str(self.marked_point),
        }


@lru_cache(maxsize=None)
def build_model(t: MonodromyTuple) -> PolygonModel:
    m = PolygonModel(t)
    m.check()
    return m


def rotate(m: PolygonModel, x, k: int):
    """Rotate a boundary parameter, or a chord / tuple of parameters, by k sixths."""
    if isinstance(x, (tuple, list)):
        return type(x)(rotate(m, y, k) for y in x)
    if hasattr(x, "rotated"):
        return x.rotated(k)
    return frac_mod1(Fraction(x) + Fraction(k, SECTORS))
