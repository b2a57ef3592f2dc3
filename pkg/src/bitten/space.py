"""Finite tolerance approximation spaces.

Subsets are fixed-width bit vectors over an ordered universe: bit ``i`` of a
mask stands for the ``i``-th element name.  Hot loops in the other modules
work on the raw ``int`` masks; :class:`Subset` is the checked, named wrapper
used at API boundaries.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import networkx as nx

# power-set sweeps refuse universes larger than this unless told otherwise
DEFAULT_MAX_UNIVERSE = 20

GRANULATION_KINDS = ("t-relateds", "blocks", "block-intersections", "explicit")


class InputError(ValueError):
    """Malformed input: unknown element names, bad kinds, mismatched universes."""


class InvariantError(ValueError):
    """A constructed object would violate one of its structural invariants."""


class CapExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured size cap."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Universe:
    elements: tuple[str, ...]

    def __post_init__(self):
        if not self.elements:
            raise InvariantError("universe must be nonempty")
        if len(set(self.elements)) != len(self.elements):
            raise InvariantError(f"duplicate element names in {self.elements}")
        object.__setattr__(self, "elements", tuple(str(e) for e in self.elements))

    @classmethod
    def of(cls, names: Iterable[str]) -> "Universe":
        return cls(tuple(names))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.elements)) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown element {name!r}") from None

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return mask

    def subset(self, names: Iterable[str] = ()) -> "Subset":
        return Subset(self, self.mask_of(names))

    def from_mask(self, mask: int) -> "Subset":
        return Subset(self, mask)

    def empty(self) -> "Subset":
        return Subset(self, 0)

    def full(self) -> "Subset":
        return Subset(self, self.full_mask)

    def names(self, mask: int) -> list[str]:
        return [self.elements[i] for i in iter_bits(mask)]

    def render(self, mask: int) -> str:
        return "{" + ",".join(self.names(mask)) + "}"

    def check_cap(self, cap: int = DEFAULT_MAX_UNIVERSE) -> None:
        if len(self) > cap:
            raise CapExceeded(f"|S| = {len(self)} exceeds power-set cap {cap}")

    def all_masks(self, cap: int = DEFAULT_MAX_UNIVERSE) -> range:
        self.check_cap(cap)
        return range(1 << len(self))


@dataclass(frozen=True)
class Subset:
    universe: Universe = field(repr=False)
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask > self.universe.full_mask:
            raise InvariantError(f"mask {self.mask:#x} outside universe")

    def _same(self, other: "Subset") -> None:
        if not isinstance(other, Subset) or other.universe != self.universe:
            raise InputError("subsets belong to different universes")

    def __or__(self, other: "Subset") -> "Subset":
        self._same(other)
        return Subset(self.universe, self.mask | other.mask)

    def __and__(self, other: "Subset") -> "Subset":
        self._same(other)
        return Subset(self.universe, self.mask & other.mask)

    def __sub__(self, other: "Subset") -> "Subset":
        self._same(other)
        return Subset(self.universe, self.mask & ~other.mask)

    def complement(self) -> "Subset":
        return Subset(self.universe, self.universe.full_mask & ~self.mask)

    def __le__(self, other: "Subset") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "Subset") -> bool:
        return self <= other and self.mask != other.mask

    def __contains__(self, name: str) -> bool:
        return bool(self.mask >> self.universe.index(name) & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.universe.names(self.mask))

    def __len__(self) -> int:
        return popcount(self.mask)

    def __str__(self) -> str:
        return self.universe.render(self.mask)


@dataclass(frozen=True)
class ToleranceRelation:
    """Reflexive, symmetric relation stored as one neighbour mask per element."""

    universe: Universe
    rows: tuple[int, ...]

    def __post_init__(self):
        n = len(self.universe)
        if len(self.rows) != n:
            raise InvariantError("tolerance needs one row per element")
        for i, row in enumerate(self.rows):
            if not row >> i & 1:
                raise InvariantError(f"not reflexive at {self.universe.elements[i]}")
            for j in iter_bits(row):
                if j >= n or not self.rows[j] >> i & 1:
                    raise InvariantError("tolerance matrix is not symmetric")

    @classmethod
    def from_matrix(cls, universe: Universe, matrix: Sequence[Sequence[bool]]) -> "ToleranceRelation":
        rows = tuple(sum(1 << j for j, v in enumerate(row) if v) for row in matrix)
        return cls(universe, rows)

    def matrix(self) -> list[list[bool]]:
        n = len(self.universe)
        return [[bool(r >> j & 1) for j in range(n)] for r in self.rows]

    def related(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def pairs(self) -> list[tuple[str, str]]:
        """Off-diagonal related pairs, each listed once in universe order."""
        el = self.universe.elements
        return [(el[i], el[j]) for i, j in combinations(range(len(el)), 2) if self.related(i, j)]

    def is_clique(self, mask: int) -> bool:
        return all(self.rows[i] & mask == mask for i in iter_bits(mask))

    def is_transitive_on(self, mask: int) -> bool:
        for i in iter_bits(mask):
            for j in iter_bits(self.rows[i] & mask):
                if self.rows[j] & mask & ~self.rows[i]:
                    return False
        return True


def identity_tolerance(universe: Universe) -> ToleranceRelation:
    return ToleranceRelation(universe, tuple(1 << i for i in range(len(universe))))


def full_tolerance(universe: Universe) -> ToleranceRelation:
    return ToleranceRelation(universe, (universe.full_mask,) * len(universe))


def tolerance_from_pairs(u: Universe, pairs: Iterable[tuple[str, str]]) -> ToleranceRelation:
    """Smallest reflexive, symmetric relation containing ``pairs``."""
    rows = [1 << i for i in range(len(u))]
    for a, b in pairs:
        i, j = u.index(a), u.index(b)
        rows[i] |= 1 << j
        rows[j] |= 1 << i
    return ToleranceRelation(u, tuple(rows))


def random_tolerance(n: int, density: float, rng: random.Random,
                     names: Sequence[str] | None = None) -> ToleranceRelation:
    """Each unordered pair joins the relation with probability ``density``."""
    if not 0.0 <= density <= 1.0:
        raise InputError("density must lie in [0, 1]")
    u = Universe.of(names or [f"x{i + 1}" for i in range(n)])
    pairs = [(a, b) for a, b in combinations(u.elements, 2) if rng.random() < density]
    return tolerance_from_pairs(u, pairs)


def t_related(T: ToleranceRelation, x: str) -> Subset:
    return Subset(T.universe, T.rows[T.universe.index(x)])


def _clique_masks(T: ToleranceRelation) -> list[int]:
    g = nx.Graph()
    g.add_nodes_from(range(len(T.universe)))
    g.add_edges_from((i, j) for i, row in enumerate(T.rows) for j in iter_bits(row) if i < j)
    return sorted(sum(1 << v for v in clique) for clique in nx.find_cliques(g))


def block_masks(T: ToleranceRelation) -> list[int]:
    return _clique_masks(T)


def blocks(T: ToleranceRelation) -> list[Subset]:
    """Maximal sets ``B`` with ``B x B`` inside ``T`` (maximal cliques)."""
    return [Subset(T.universe, m) for m in block_masks(T)]


def maximal_masks(masks: Iterable[int]) -> list[int]:
    """Inclusion-maximal members of a family of masks, sorted."""
    uniq = set(masks)
    return sorted(m for m in uniq if not any(m != o and m & ~o == 0 for o in uniq))


def mu_block_masks(T: ToleranceRelation, reading: str = "clique") -> list[int]:
    """Maximal unions of T-related neighbourhoods on which ``T`` restricts nicely.

    ``reading="clique"`` keeps a union when ``T`` is total on it (a single
    equivalence class); ``reading="equivalence"`` keeps it whenever the
    restriction is transitive.  Neither reading recovers the blocks of every
    tolerance: a block that is not a union of neighbourhoods (e.g. the middle
    edge of a 4-path) is never produced.
    """
    if reading not in ("clique", "equivalence"):
        raise InputError(f"unknown reading {reading!r}")
    keep = T.is_clique if reading == "clique" else T.is_transitive_on
    tau = sorted(set(T.rows))
    unions = set()
    for k in range(1 << len(tau)):
        u = 0
        for i in iter_bits(k):
            u |= tau[i]
        if u not in unions and keep(u):
            unions.add(u)
    return maximal_masks(unions)


def mu_blocks(T: ToleranceRelation, reading: str = "clique") -> list[Subset]:
    return [Subset(T.universe, m) for m in mu_block_masks(T, reading)]


def theta0(T: ToleranceRelation) -> list[Subset]:
    """Partition by equal ``dom_T(z)``, the intersection of neighbourhoods containing z."""
    u = T.universe
    doms = []
    for z in range(len(u)):
        d = u.full_mask
        for row in T.rows:
            if row >> z & 1:
                d &= row
        doms.append(d)
    classes: dict[int, int] = {}
    for z, d in enumerate(doms):
        classes[d] = classes.get(d, 0) | 1 << z
    return [Subset(u, m) for m in sorted(classes.values(), key=lambda m: (m & -m))]


def dom(T: ToleranceRelation, x: str) -> Subset:
    z = T.universe.index(x)
    d = T.universe.full_mask
    for row in T.rows:
        if row >> z & 1:
            d &= row
    return Subset(T.universe, d)


@dataclass(frozen=True)
class Granulation:
    universe: Universe
    masks: tuple[int, ...]
    kind: str = "explicit"

    def __post_init__(self):
        if self.kind not in GRANULATION_KINDS:
            raise InputError(f"unknown granulation kind {self.kind!r}")
        # duplicates removed, first occurrence kept
        object.__setattr__(self, "masks", tuple(dict.fromkeys(self.masks)))
        cover = 0
        for m in self.masks:
            if m < 0 or m > self.universe.full_mask:
                raise InvariantError("granule outside universe")
            cover |= m
        if cover != self.universe.full_mask:
            missing = self.universe.render(self.universe.full_mask & ~cover)
            raise InvariantError(f"granules do not cover the universe; missing {missing}")

    @property
    def granules(self) -> list[Subset]:
        return [Subset(self.universe, m) for m in self.masks]

    def __len__(self) -> int:
        return len(self.masks)

    def is_partition(self) -> bool:
        """True when the granules are pairwise disjoint."""
        seen = 0
        for m in self.masks:
            if m & seen:
                return False
            seen |= m
        return True


def block_intersection_masks(T: ToleranceRelation) -> list[int]:
    """All intersections of subfamilies of blocks; the empty subfamily gives S."""
    hs = block_masks(T)
    out = {T.universe.full_mask}
    frontier = {T.universe.full_mask}
    # closure under pairwise intersection with a block enumerates every subfamily
    while frontier:
        nxt = set()
        for m in frontier:
            for h in hs:
                v = m & h
                if v not in out:
                    out.add(v)
                    nxt.add(v)
        frontier = nxt
    return sorted(out, key=lambda m: (-popcount(m), m))


def granulation(T: ToleranceRelation, kind: str = "t-relateds",
                granules: Iterable[Subset | Iterable[str]] | None = None) -> Granulation:
    u = T.universe
    if kind == "t-relateds":
        return Granulation(u, T.rows, kind)
    if kind == "blocks":
        return Granulation(u, tuple(block_masks(T)), kind)
    if kind == "block-intersections":
        return Granulation(u, tuple(block_intersection_masks(T)), kind)
    if kind == "explicit":
        if granules is None:
            raise InputError("explicit granulation needs granules")
        return explicit_granulation(u, granules)
    raise InputError(f"unknown granulation kind {kind!r}")


def explicit_granulation(u: Universe, granules: Iterable[Subset | Iterable[str]]) -> Granulation:
    masks = []
    for g in granules:
        if isinstance(g, Subset):
            if g.universe != u:
                raise InputError("granule from a different universe")
            masks.append(g.mask)
        else:
            masks.append(u.mask_of(g))
    return Granulation(u, tuple(masks), "explicit")


def example_space() -> ToleranceRelation:
    """Four points, tolerance generated by x1~x2 and x2~x3."""
    u = Universe(("x1", "x2", "x3", "x4"))
    return tolerance_from_pairs(u, [("x1", "x2"), ("x2", "x3")])
