"""Definable sets over block intersections as a double Heyting algebra.

The carrier is the union closure of the block-intersection granules.  Because
those granules are closed under intersection, the carrier is a finite
distributive lattice of sets, so ``X -> Y`` is the largest member whose
meet with ``X`` lies in ``Y`` and ``X ⊖ Y`` the smallest member ``Z`` with
``X ⊆ Y ∪ Z``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .space import (
    DEFAULT_MAX_UNIVERSE,
    CapExceeded,
    InputError,
    InvariantError,
    Subset,
    ToleranceRelation,
    Universe,
    block_intersection_masks,
    popcount,
)

SUBTRACT_RANGES = ("definable", "granules")
DEFAULT_MAX_CARRIER = 1 << 12


def union_closure(masks) -> list[int]:
    out = {0}
    for g in masks:
        out |= {m | g for m in out}
    return sorted(out, key=lambda m: (popcount(m), m))


@dataclass(frozen=True)
class DefinableLattice:
    universe: Universe
    granules: tuple[int, ...]
    carrier: tuple[int, ...]
    subtract_range: str = "definable"

    def __post_init__(self):
        if self.subtract_range not in SUBTRACT_RANGES:
            raise InputError(f"subtract range must be one of {SUBTRACT_RANGES}")
        members = set(self.carrier)
        full = self.universe.full_mask
        if 0 not in members or full not in members:
            raise InvariantError("carrier must contain the empty set and the universe")
        for a, b in itertools.combinations(self.carrier, 2):
            if a | b not in members or a & b not in members:
                raise InvariantError("carrier is not a lattice of sets")

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.carrier)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.universe.full_mask

    def _check(self, *xs: int) -> None:
        for x in xs:
            if x not in self.members:
                raise InputError(f"{self.universe.render(x)} is not definable")

    def implies(self, x: int, y: int) -> int:
        self._check(x, y)
        out = 0
        for a in self.granules:
            if x & a & ~y == 0:
                out |= a
        return out

    def subtract(self, x: int, y: int) -> int:
        self._check(x, y)
        rng = self.carrier if self.subtract_range == "definable" else self.granules
        out = self.top
        for b in rng:
            if x & ~(y | b) == 0:
                out &= b
        return out

    def atoms(self) -> list[int]:
        nz = [m for m in self.carrier if m]
        return [m for m in nz if not any(o != m and o & ~m == 0 for o in nz)]


def definable_sets(T: ToleranceRelation, cap: int = DEFAULT_MAX_UNIVERSE,
                   subtract_range: str = "definable",
                   max_carrier: int = DEFAULT_MAX_CARRIER) -> DefinableLattice:
    T.universe.check_cap(cap)
    gr = tuple(block_intersection_masks(T))
    carrier = union_closure(gr)
    if len(carrier) > max_carrier:
        raise CapExceeded(f"{len(carrier)} definable sets exceed the cap {max_carrier}")
    return DefinableLattice(T.universe, gr, tuple(carrier), subtract_range)


def implies(D: DefinableLattice, X: Subset, Y: Subset) -> Subset:
    return Subset(D.universe, D.implies(X.mask, Y.mask))


def subtract(D: DefinableLattice, X: Subset, Y: Subset) -> Subset:
    return Subset(D.universe, D.subtract(X.mask, Y.mask))


HEYTING_LAWS = (
    "residuation",
    "x-x=0",
    "x|(x-y)=x",
    "(x-y)|y=x|y",
    "(x|y)-z=(x-z)|(y-z)",
    "z-(x&y)=(z-x)|(z-y)",
    "closed",
    "distributive",
    "atomic",
)


@dataclass
class HeytingReport:
    size: int
    violations: dict[str, list[tuple[int, ...]]] = field(default_factory=dict)
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    @property
    def failing(self) -> list[str]:
        return [k for k in HEYTING_LAWS if self.violations.get(k)]


def double_heyting_report(D: DefinableLattice, max_witnesses: int = 5) -> HeytingReport:
    C = D.carrier
    rep = HeytingReport(len(C), {k: [] for k in HEYTING_LAWS}, {k: 0 for k in HEYTING_LAWS})
    imp = {(x, y): D.implies(x, y) for x in C for y in C}
    sub = {(x, y): D.subtract(x, y) for x in C for y in C}

    def record(law: str, good: bool, *w: int) -> None:
        rep.checked[law] += 1
        if not good and len(rep.violations[law]) < max_witnesses:
            rep.violations[law].append(w)

    for (x, y), v in itertools.chain(imp.items(), sub.items()):
        record("closed", v in D.members, x, y)
    for x in C:
        record("x-x=0", sub[x, x] == 0, x)
        for y in C:
            record("x|(x-y)=x", x | sub[x, y] == x, x, y)
            record("(x-y)|y=x|y", sub[x, y] | y == x | y, x, y)
            for z in C:
                record("residuation", (z & x & ~y == 0) == (z & ~imp[x, y] == 0), x, y, z)
                xy = x | y
                record("(x|y)-z=(x-z)|(y-z)", sub.get((xy, z), D.subtract(xy, z)) == sub[x, z] | sub[y, z], x, y, z)
                record("z-(x&y)=(z-x)|(z-y)", D.subtract(z, x & y) == sub[z, x] | sub[z, y], x, y, z)
                record("distributive", x & (y | z) == (x & y) | (x & z), x, y, z)
    atoms = D.atoms()
    for x in C:
        if x:
            record("atomic", any(a & ~x == 0 for a in atoms), x)
    return rep
