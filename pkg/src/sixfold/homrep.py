"""Exact symplectic representation on H_1 of the closed model surface.

Cycles are taken in the cellular chain complex of the quotient of the disk
boundary, in the basis of fundamental cycles of a spanning tree.  A chordal
curve is pushed onto the boundary to obtain its class.  The intersection
form is solved from signed chord crossings of basic curves and then brought
to the standard ``[[0, I], [-I, 0]]`` by an integral symplectic basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .polygon import ModelError, PolygonModel

Matrix = tuple  # tuple of row tuples of ints


# -- small exact integer linear algebra ------------------------------------

_SAFE = 1 << 62


def mat_mul(a, b):
    A = np.array(a, dtype=object)
    B = np.array(b, dtype=object)
    n = A.shape[1] if A.ndim == 2 else 0
    bound = max(1, int(np.abs(A).max(initial=0))) * max(1, int(np.abs(B).max(initial=0))) * max(n, 1)
    if bound < _SAFE:
        C = A.astype(np.int64) @ B.astype(np.int64)
    else:
        C = A @ B
    return tuple(tuple(int(x) for x in row) for row in C.tolist())


def mat_vec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def identity(n: int):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a))


def standard_form(g: int):
    n = 2 * g
    return tuple(tuple(1 if j == i + g else -1 if i == j + g else 0 for j in range(n))
                 for i in range(n))


PRIME = (1 << 61) - 1


def _lift(x: int) -> int:
    x %= PRIME
    return x - PRIME if x > PRIME // 2 else x


def _mod_echelon(rows, ncols):
    """Reduced row echelon form mod PRIME; returns (rows, pivot columns)."""
    m = [[x % PRIME for x in r] for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], PRIME - 2, PRIME)
        m[r] = [x * inv % PRIME for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % PRIME for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    return m[:r], pivots


def mat_inverse(a):
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    red, piv = _mod_echelon(aug, n)
    if piv != list(range(n)):
        raise ModelError("model malformed: singular basis change")
    inv = tuple(tuple(_lift(x) for x in row[n:]) for row in red)
    if mat_mul(a, inv) != identity(n):
        raise ModelError("model malformed: basis change not unimodular")
    return inv


def lattice_basis(vectors):
    """A basis of the integer row lattice spanned by ``vectors`` (echelon form)."""
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    n = len(vectors[0]) if vectors else 0
    for col in range(n):
        live = [r for r in rows if r[col] != 0]
        if not live:
            continue
        rest = [r for r in rows if r[col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (nxt if r[col] != 0 else rest).append(r)
            live = nxt
        basis.append(live[0])
        rows = [r for r in rest if any(r)]
    return basis


# -- the homology of a model ---------------------------------------------

@dataclass
class Homology:
    model: PolygonModel

    def __post_init__(self):
        m = self.model
        n = m.n_edges
        self.g = m.genus
        self.surface_edges = [e for e in range(n) if e < m.partner(e)]
        self.key_index = {e: i for i, e in enumerate(self.surface_edges)}
        classes = [m.vertex_class_of(v) for v in range(n)]
        self.vclass = classes
        ends = [(classes[e], classes[(e + 1) % n]) for e in self.surface_edges]
        nv = len(m.vertex_classes)
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(nv)}
        for i, (a, b) in enumerate(ends):
            adj[a].append((i, b))
            adj[b].append((i, a))
        # spanning tree by breadth-first search; parent[v] = (edge, neighbour)
        parent: dict[int, tuple[int, int] | None] = {0: None}
        order = [0]
        for v in order:
            for i, w in adj[v]:
                if w not in parent:
                    parent[w] = (i, v)
                    order.append(w)
        if len(parent) != nv:
            raise ModelError("model malformed: disconnected 1-skeleton")
        self.ends = ends
        self.parent = parent
        self.tree = {p[0] for p in parent.values() if p is not None}
        self.cotree = [i for i in range(len(ends)) if i not in self.tree]
        self.cotree_pos = {i: k for k, i in enumerate(self.cotree)}
        if len(self.cotree) != 2 * self.g:
            raise ModelError("model malformed: wrong first Betti number")
        # oriented D-edge j as (surface edge index, sign)
        self.word = [(self.key_index[min(e, m.partner(e))], 1 if e < m.partner(e) else -1)
                     for e in range(n)]
        self.fundamental = [self._fundamental_cycle(i) for i in self.cotree]
        self.raw_gram = self._solve_gram()
        self.basis = self._symplectic_basis(self.raw_gram)  # rows, in cotree coordinates
        self.to_std = mat_inverse(self.basis)
        self.J = standard_form(self.g)
        check = mat_mul(mat_mul(self.basis, self.raw_gram), transpose(self.basis))
        if check != self.J:
            raise AssertionError("symplectic basis extraction failed")
        self.alpha = self._alpha_matrix()

    def _tree_path(self, v: int) -> dict[int, int]:
        """Chain of tree edges from the root to v."""
        chain: dict[int, int] = {}
        while self.parent[v] is not None:
            i, u = self.parent[v]
            # edge i joins u and v; it is traversed u -> v
            chain[i] = chain.get(i, 0) + (1 if self.ends[i] == (u, v) else -1)
            v = u
        return chain

    def _fundamental_cycle(self, i: int) -> dict[int, int]:
        a, b = self.ends[i]
        chain = {i: 1}
        for k, v in self._tree_path(b).items():  # back from b to the root
            chain[k] = chain.get(k, 0) - v
        for k, v in self._tree_path(a).items():  # root to a
            chain[k] = chain.get(k, 0) + v
        return {k: v for k, v in chain.items() if v}

    def _push_cycle(self, c) -> dict[int, int]:
        """Cellular cycle homologous to c: crossings slide to edge heads, chords to arcs."""
        m = self.model
        n = m.n_edges
        chain: dict[int, int] = {}

        def head_vertex(t):
            e, _ = m.locate(t)
            return (e + 1) % n if e < m.partner(e) else e

        for ch in c.chords:
            a, b = head_vertex(ch.start), head_vertex(ch.end)
            j = a
            while j != b:
                i, s = self.word[j]
                chain[i] = chain.get(i, 0) + s
                j = (j + 1) % n
        return {k: v for k, v in chain.items() if v}

    def _raw_class(self, c) -> tuple[int, ...]:
        chain = self._push_cycle(c)
        return tuple(chain.get(i, 0) for i in self.cotree)

    def _solve_gram(self):
        """Intersection form on fundamental cycles from curves: class * gram = crossings."""
        from .curves import algebraic_crossings, basic_chordal_curves, invariant_curve

        m = self.model
        curves = basic_chordal_curves(m)
        extra = []
        for e in range(m.n_edges):
            for k in (2, 3):
                try:
                    extra.append(invariant_curve(m, m.point_on_edge(e, Fraction(1, 3)), k))
                except Exception:
                    pass

        def system(cs):
            rows, rhs = [], []
            for c in cs:
                cochain = c.crossing_cochain()
                rows.append(self._raw_class(c))
                rhs.append(tuple(sum(cochain.get(self.surface_edges[k], 0) * v
                                     for k, v in z.items()) for z in self.fundamental))
            return rows, rhs

        rows, rhs = system(curves)
        try:
            gram = _solve_rows(rows, rhs, 2 * self.g)
        except ModelError:
            curves += extra
            rows, rhs = system(curves)
            gram = _solve_rows(rows, rhs, 2 * self.g)
        for y, f in zip(rows, rhs):
            if mat_vec(transpose(gram), y) != f:
                raise AssertionError("intersection form inconsistent across curves")
        if any(gram[i][j] != -gram[j][i] for i in range(len(gram)) for j in range(len(gram))):
            raise AssertionError("intersection form not skew")
        # orient so that the form agrees with signed chord crossings
        sign = 0
        for c in curves[:40]:
            for d in curves[:40]:
                if c is d or set(c.endpoints) & set(d.endpoints):
                    continue
                alg = algebraic_crossings(c, d)
                if alg:
                    val = sum(a * gram[i][j] * b for i, a in enumerate(self._raw_class(c))
                              for j, b in enumerate(self._raw_class(d)))
                    if abs(val) != abs(alg):
                        raise AssertionError("form disagrees with chord crossings")
                    sign = 1 if val == alg else -1
                    break
            if sign:
                break
        if not sign:
            raise ModelError("model malformed: no intersecting curves")
        return tuple(tuple(sign * x for x in row) for row in gram)

    @staticmethod
    def _symplectic_basis(gram):
        n = len(gram)

        def form(u, v):
            return sum(u[i] * gram[i][j] * v[j] for i in range(n) for j in range(n) if u[i] and v[j])

        span = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        es, fs = [], []
        while span:
            e = span[0]
            # combination f of span with form(e, f) = 1, by an extended gcd
            coeffs = [form(e, v) for v in span]
            f = [0] * n
            cur = 0
            for v, c in zip(span, coeffs):
                if c == 0:
                    continue
                if cur == 0:
                    f, cur = list(v), c
                    continue
                gcd, x, y = _egcd(cur, c)
                f = [x * a + y * b for a, b in zip(f, v)]
                cur = gcd
            if abs(cur) != 1:
                raise ModelError("model malformed: degenerate form")
            f = tuple(cur * a for a in f)  # now form(e, f) = 1
            es.append(e)
            fs.append(f)
            projected = []
            for w in span:
                we, wf = form(e, w), form(f, w)
                projected.append(tuple(wi - we * fi + wf * ei for wi, ei, fi in zip(w, e, f)))
            span = [tuple(r) for r in lattice_basis(projected)]
        return tuple(es + fs)

    def _alpha_matrix(self):
        m = self.model
        n = m.n_edges
        shift = m.per_sector
        # image of each surface edge under the rotation, as (surface edge, sign)
        image = {}
        for i, e in enumerate(self.surface_edges):
            image[i] = self.word[(e + shift) % n]
        cols = []
        for row in self.basis:
            chain: dict[int, int] = {}
            for coord, z in zip(row, self.fundamental):
                for k, v in z.items():
                    j, s = image[k]
                    chain[j] = chain.get(j, 0) + coord * v * s
            cols.append(self.std_coords(tuple(chain.get(i, 0) for i in self.cotree)))
        return transpose(tuple(cols))

    # -- public API ----------------------------------------------------------
    def std_coords(self, cotree_vec) -> tuple[int, ...]:
        if not hasattr(self, "_to_std_t"):
            t = np.array(transpose(self.to_std), dtype=object)
            small = int(np.abs(t).max()) * 4 * self.model.n_edges < _SAFE
            self._to_std_t = t.astype(np.int64) if small else t
        v = np.array(cotree_vec, dtype=self._to_std_t.dtype)
        return tuple(int(x) for x in self._to_std_t @ v)

    def curve_class(self, c) -> tuple[int, ...]:
        if c.model is not self.model and c.model != self.model:
            raise ModelError("curve lives on another model")
        cache = self.__dict__.setdefault("_class_cache", {})
        if c.chords not in cache:
            cache[c.chords] = self.std_coords(self._raw_class(c))
        return cache[c.chords]

    def pairing(self, u, v) -> int:
        g = self.g
        return sum(u[i] * v[i + g] - u[i + g] * v[i] for i in range(g))


@lru_cache(maxsize=64)
def homology(m: PolygonModel) -> Homology:
    return Homology(m)


def _solve_rows(rows, rhs, n):
    """Integer X with rows * X = rhs, solved mod a large prime and lifted."""
    width = len(rhs[0])
    aug = [list(r) + list(f) for r, f in zip(rows, rhs)]
    red, piv = _mod_echelon(aug, n)
    if piv[:n] != list(range(n)):
        raise ModelError("model malformed: curves do not span homology")
    return tuple(tuple(_lift(x) for x in row[n:n + width]) for row in red[:n])


def _egcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0) if a >= 0 else (-a, -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def curve_class(m: PolygonModel, c):
    return homology(m).curve_class(c)


def pairing(m: PolygonModel):
    return homology(m).J


def alpha_matrix(m: PolygonModel):
    return homology(m).alpha


def twist_matrix(v, sign: int = 1):
    """Homology action x -> x + sign * <x, v> v of the twist about a curve of class v."""
    n = len(v)
    g = n // 2
    jv = [0] * n  # row vector (J v)^T, so that <x, v> = jv . x
    for i in range(g):
        jv[i] = v[i + g]
        jv[i + g] = -v[i]
    return tuple(tuple(int(i == j) + sign * v[i] * jv[j] for j in range(n)) for i in range(n))


def is_symplectic(a, mod: int | None = None) -> bool:
    n = len(a)
    J = standard_form(n // 2)
    lhs = mat_mul(mat_mul(transpose(a), J), a)
    if mod is None:
        return lhs == J
    return all((x - y) % mod == 0 for r1, r2 in zip(lhs, J) for x, y in zip(r1, r2))


def matrix_order(a, limit: int = 1000) -> int:
    n = len(a)
    I = identity(n)
    cur = a
    for k in range(1, limit + 1):
        if cur == I:
            return k
        cur = mat_mul(cur, a)
    raise ValueError("order exceeds limit")


def to_numpy(a) -> np.ndarray:
    return np.array(a, dtype=np.int64)


# -- twist words ----------------------------------------------------------

ALPHA = "alpha"


@dataclass(frozen=True)
class TwistWord:
    """A word in twists about named curves and powers of the rotation.

    Letters are ``(name, exponent)``; the name ``"alpha"`` denotes the
    rotation.  The word is read as a composition with the rightmost letter
    acting first.
    """

    letters: tuple = ()
    curves: tuple = ()  # sorted (name, ChordalCurve) pairs

    @classmethod
    def twist(cls, c, power: int = 1) -> "TwistWord":
        return cls(((c.name, power),), ((c.name, c),))

    @classmethod
    def multitwist(cls, curves, power: int = 1) -> "TwistWord":
        w = cls()
        for c in curves:
            w = w * cls.twist(c, power)
        return w

    @classmethod
    def alpha(cls, k: int = 1) -> "TwistWord":
        return cls(((ALPHA, k),))

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        names = dict(self.curves)
        for name, c in other.curves:
            if name in names and not names[name].same_chords(c):
                raise ValueError(f"curve name {name!r} used for two different curves")
            names[name] = c
        return TwistWord(self.letters + other.letters, tuple(sorted(names.items(), key=lambda x: x[0])))

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((n, -k) for n, k in reversed(self.letters)), self.curves)

    def conj(self, by: "TwistWord") -> "TwistWord":
        """by * self * by^-1"""
        return by * self * by.inverse()

    def reversed(self) -> "TwistWord":
        return TwistWord(tuple(reversed(self.letters)), self.curves)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(n if k == 1 else f"{n}^{k}" for n, k in self.letters)

    def to_json(self) -> dict:
        return {"letters": [[n, k] for n, k in self.letters],
                "curves": {n: c.to_json() for n, c in self.curves}}


def sp_inverse(a):
    """Inverse of a matrix preserving the standard form: J^-1 a^T J."""
    J = np.array(standard_form(len(a) // 2), dtype=object)
    return tuple(tuple(int(x) for x in row) for row in (-J @ np.array(a, dtype=object).T @ J).tolist())


def mat_pow(a, k: int):
    if k < 0:
        a, k = sp_inverse(a), -k
    out = identity(len(a))
    for _ in range(k):
        out = mat_mul(out, a)
    return out


def evaluate(w: TwistWord, model: PolygonModel | None = None, convention: str = "right"):
    """Homology matrix of a word.

    ``convention="right"`` multiplies the letter matrices in written order,
    so the rightmost letter acts first on column vectors; ``"left"`` uses
    the opposite order.
    """
    curves = dict(w.curves)
    if model is None:
        if not curves:
            raise ValueError("a model is needed to evaluate a pure rotation word")
        model = next(iter(curves.values())).model
    h = homology(model)
    cache = {}
    mats = []
    for name, k in w.letters:
        if (name, k) not in cache:
            if name == ALPHA:
                cache[(name, k)] = mat_pow(h.alpha, k)
            else:
                # powers of a transvection stay transvections
                cache[(name, k)] = twist_matrix(h.curve_class(curves[name]), k)
        mats.append(cache[(name, k)])
    if convention == "left":
        mats.reverse()
    elif convention != "right":
        raise ValueError(f"unknown convention {convention!r}")
    out = identity(2 * h.g)
    for m in mats:
        out = mat_mul(out, m)
    return out


# -- finite closure -------------------------------------------------------

def sp_order(g: int, p: int) -> int:
    out = p ** (g * g)
    for i in range(1, g + 1):
        out *= p ** (2 * i) - 1
    return out


class ClosureInfeasible(RuntimeError):
    pass


@dataclass(frozen=True)
class ClosureResult:
    g: int
    p: int
    order: int
    is_full: bool
    complete: bool  # False when stopped early by max_elements
    levels: tuple[int, ...]  # elements found per BFS level
    elapsed: float
    generator_set_id: str = ""

    def to_json(self) -> dict:
        return {"g": self.g, "p": self.p, "generator_set_id": self.generator_set_id,
                "order": self.order, "is_full": self.is_full, "complete": self.complete,
                "target": sp_order(self.g, self.p), "levels": list(self.levels),
                "elapsed": round(self.elapsed, 3)}


# bytes per stored element: key plus frontier matrix plus sort scratch
_BYTES_PER_ELEMENT = 48


def closure_mod_p(gens, p: int, mem_budget: int = 2 << 30, max_elements: int | None = None,
                  generator_set_id: str = "") -> ClosureResult:
    """Breadth-first closure of the group generated by integer symplectic matrices mod p.

    Matrices are packed into int64 words (base p digits), so each level is
    one matrix product plus a sorted merge.  Large matrices use several
    words per key, compared as raw bytes.  With ``max_elements`` the search
    stops once that many elements are known and reports growth only.
    """
    import time

    start = time.perf_counter()
    gens = [np.array(a, dtype=np.int64) % p for a in gens]
    n = gens[0].shape[0]
    g = n // 2
    J = np.array(standard_form(g), dtype=np.int64)
    for a in gens:
        if np.any((a.T @ J @ a - J) % p):
            raise ValueError("generator is not symplectic mod p")
    digits = 1
    while p ** (digits + 1) < 2 ** 63:
        digits += 1
    words = -(-n * n // digits)
    target = sp_order(g, p)
    cap = target if max_elements is None else min(target, max_elements)
    if cap * (_BYTES_PER_ELEMENT + 8 * (words - 1) + n * n * 8 * (words > 1)) > mem_budget:
        raise ClosureInfeasible("closure infeasible at this (g,p)")
    pad = words * digits - n * n
    weights = (p ** np.arange(digits, dtype=np.int64)).astype(np.int64)
    gf = [a.astype(np.float64) for a in gens]

    def keys(mats):
        flat = mats.reshape(len(mats), n * n)
        if words == 1:
            return flat @ weights[: n * n]
        flat = np.concatenate([flat, np.zeros((len(mats), pad), dtype=np.int64)], axis=1)
        packed = np.ascontiguousarray(flat.reshape(len(mats), words, digits) @ weights)
        return packed.view(np.dtype((np.void, 8 * words))).ravel()

    frontier = np.eye(n, dtype=np.int64)[None]
    known = keys(frontier)
    levels = [1]
    while len(frontier) and len(known) < cap:
        flat = frontier.reshape(-1, n).astype(np.float64)
        cand = np.concatenate([(flat @ a).astype(np.int64) % p for a in gf]).reshape(-1, n, n)
        ck = keys(cand)
        ck, first = np.unique(ck, return_index=True)
        fresh = ~np.isin(ck, known, assume_unique=True)
        frontier = cand[first[fresh]]
        if len(frontier):
            known = np.union1d(known, ck[fresh])
            levels.append(int(fresh.sum()))
    order = len(known)
    complete = len(frontier) == 0 or order >= target
    return ClosureResult(g, p, order, order == target, complete, tuple(levels),
                         time.perf_counter() - start, generator_set_id)
