"""Combinatorics of Z/6 branched covers of the sphere.

A cover is specified by its monodromy tuple: the local monodromies
(elements of Z/6) at the branch points, written in the canonical order
``1^a 5^(p-a) 2^b 4^(q-b) 3^r``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

N = 6
CANONICAL_ORDER = (1, 5, 2, 4, 3)


class BranchingError(ValueError):
    pass


def element_order(m: int) -> int:
    return N // math.gcd(m % N, N)


@dataclass(frozen=True)
class BranchingVector:
    p: int
    q: int
    r: int

    def __post_init__(self):
        if min(self.p, self.q, self.r) < 0:
            raise BranchingError("inconsistent branching vector")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.p, self.q, self.r)


@dataclass(frozen=True)
class MonodromyTuple:
    """Local monodromies in canonical order; validated on construction."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise BranchingError("empty monodromy tuple")
        if any(e % N == 0 or not 0 < e < N for e in entries):
            raise BranchingError("all entries must be nonzero elements of Z/6")
        if sum(entries) % N:
            raise BranchingError("entries must sum to 0 mod 6")
        if math.gcd(N, *entries) != 1:
            raise BranchingError("entries must generate Z/6")
        rank = {m: i for i, m in enumerate(CANONICAL_ORDER)}
        if list(entries) != sorted(entries, key=rank.__getitem__):
            raise BranchingError("entries must be in canonical order 1 5 2 4 3")

    @classmethod
    def from_exponents(cls, a: int = 0, a5: int = 0, b: int = 0, b4: int = 0, r: int = 0):
        """Build ``1^a 5^a5 2^b 4^b4 3^r``."""
        counts = (a, a5, b, b4, r)
        return cls(tuple(m for m, c in zip(CANONICAL_ORDER, counts) for _ in range(c)))

    @classmethod
    def parse(cls, symbol: str) -> "MonodromyTuple":
        entries: list[int] = []
        for tok in symbol.split():
            m = re.fullmatch(r"([1-5])(?:\^\{?(\d+)\}?)?", tok)
            if m is None:
                raise BranchingError(f"bad tuple token {tok!r}")
            entries += [int(m.group(1))] * int(m.group(2) or 1)
        return cls(tuple(entries))

    def exponents(self) -> tuple[int, ...]:
        return tuple(self.entries.count(m) for m in CANONICAL_ORDER)

    def __str__(self) -> str:
        parts = []
        for m, c in zip(CANONICAL_ORDER, self.exponents()):
            if c == 1:
                parts.append(str(m))
            elif c > 1:
                parts.append(f"{m}^{c}")
        return " ".join(parts)

    def __len__(self) -> int:
        return len(self.entries)


def branching_from_tuple(t: MonodromyTuple) -> BranchingVector:
    orders = [element_order(m) for m in t.entries]
    return BranchingVector(orders.count(6), orders.count(3), orders.count(2))


def genus_from_branching(v: BranchingVector) -> int:
    """Riemann-Hurwitz for a Z/6 cover of the sphere: 5p + 4q + 3r = 10 + 2g."""
    total = 5 * v.p + 4 * v.q + 3 * v.r
    if total < 10 or total % 2:
        raise BranchingError("inconsistent branching vector")
    return (total - 10) // 2


def genus_of(t: MonodromyTuple) -> int:
    return genus_from_branching(branching_from_tuple(t))


def model_tuple(g: int) -> MonodromyTuple:
    """The tuple used for genus g (one row per residue class, special row at g = 3)."""
    if g < 2:
        raise BranchingError("out of scope")
    if g == 3:
        return MonodromyTuple.from_exponents(a=1, a5=1, r=2)
    k, res = divmod(g, 3)
    if res == 2:
        return MonodromyTuple.from_exponents(a=2, b4=1, r=2 * k)
    if res == 1:
        return MonodromyTuple.from_exponents(a=3, r=2 * (k - 1) + 1)
    # g = 3 + 3(k' + 1) with k' = k - 2
    return MonodromyTuple.from_exponents(a=2, a5=1, b=1, r=2 * (k - 2) + 1)


def fixed_point_count(t: MonodromyTuple, power: int) -> int:
    """Number of fixed points of alpha^power (power in 1, 2, 3), by orbit-stabilizer."""
    v = branching_from_tuple(t)
    if power == 1:
        return v.p
    if power == 2:
        return v.p + 2 * v.q
    if power == 3:
        return v.p + 3 * v.r
    raise BranchingError("power must be 1, 2 or 3")


def hyperelliptic_flag(t: MonodromyTuple) -> bool:
    return fixed_point_count(t, 3) == 2 * genus_of(t) + 2


@dataclass(frozen=True)
class ModelRow:
    g: int
    vector: BranchingVector
    tuple: MonodromyTuple
    fp3: int
    hyperelliptic: bool

    def to_json(self) -> dict:
        p, q, r = self.vector.as_tuple()
        return {"g": self.g, "p": p, "q": q, "r": r, "tuple": str(self.tuple),
                "fp3": self.fp3, "hyperelliptic": self.hyperelliptic}


def model_row(g: int) -> ModelRow:
    t = model_tuple(g)
    return ModelRow(g, branching_from_tuple(t), t, fixed_point_count(t, 3), hyperelliptic_flag(t))


def model_table(genera) -> list[ModelRow]:
    return [model_row(g) for g in genera]
