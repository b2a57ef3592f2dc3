"""Approximation operators on one tolerance space.

The granular operators work against a :class:`~bitten.space.Granulation`;
the starred, sharp and preclusive operators read the tolerance directly.
Mask-level helpers (``lower_mask`` and friends) are exported for the
exhaustive sweeps elsewhere in the package.

The bitten upper approximation is the upper approximation with the negative
region (lower approximation of the complement) removed.  A later shorthand,
upper minus lower, gives the empty set on ``{x4}`` in the four-point example
whereas the worked table lists ``{x4}``; the negative-region form is used.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from .space import (
    DEFAULT_MAX_UNIVERSE,
    Granulation,
    InputError,
    Subset,
    ToleranceRelation,
    Universe,
)

DEFAULT_SAMPLES = 1024

LAW_IDS = (
    "1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b", "5a", "5b",
    "6a", "6b", "7a", "7b", "8a", "8b", "9a", "9b", "10A", "10B", "11A", "11B",
)


def lower_mask(granules: tuple[int, ...], x: int) -> int:
    out = 0
    for g in granules:
        if g & ~x == 0:
            out |= g
    return out


def upper_mask(granules: tuple[int, ...], x: int) -> int:
    out = 0
    for g in granules:
        if g & x:
            out |= g
    return out


def bitten_mask(granules: tuple[int, ...], x: int, full: int) -> int:
    return upper_mask(granules, x) & ~lower_mask(granules, full & ~x)


class Approximator:
    """Caches all four granular operators over every subset of a small universe."""

    def __init__(self, G: Granulation, cap: int = DEFAULT_MAX_UNIVERSE):
        G.universe.check_cap(cap)
        self.G = G
        self.full = G.universe.full_mask
        gs = G.masks
        size = 1 << len(G.universe)
        self.lower = [lower_mask(gs, x) for x in range(size)]
        self.upper = [upper_mask(gs, x) for x in range(size)]
        full = self.full
        self.negative = [self.lower[full & ~x] for x in range(size)]
        self.bitten = [self.upper[x] & ~self.negative[x] for x in range(size)]


def _check(G: Granulation, X: Subset) -> None:
    if X.universe != G.universe:
        raise InputError("subset and granulation live on different universes")


def gr_lower(G: Granulation, X: Subset) -> Subset:
    """Union of the granules included in ``X``."""
    _check(G, X)
    return Subset(G.universe, lower_mask(G.masks, X.mask))


def gr_upper(G: Granulation, X: Subset) -> Subset:
    """Union of the granules meeting ``X``."""
    _check(G, X)
    return Subset(G.universe, upper_mask(G.masks, X.mask))


def negative_region(G: Granulation, X: Subset) -> Subset:
    _check(G, X)
    return Subset(G.universe, lower_mask(G.masks, G.universe.full_mask & ~X.mask))


def bitten_upper(G: Granulation, X: Subset) -> Subset:
    _check(G, X)
    return Subset(G.universe, bitten_mask(G.masks, X.mask, G.universe.full_mask))


@dataclass(frozen=True)
class ApproximationProfile:
    subject: Subset
    lower: Subset
    upper: Subset
    negative: Subset
    bitten_upper: Subset
    boundary: Subset

    def __post_init__(self):
        assert self.lower <= self.subject <= self.bitten_upper <= self.upper
        assert self.bitten_upper == self.upper - self.negative
        assert self.boundary == self.bitten_upper - self.lower


def profile(G: Granulation, X: Subset) -> ApproximationProfile:
    lo = gr_lower(G, X)
    bu = bitten_upper(G, X)
    return ApproximationProfile(
        subject=X,
        lower=lo,
        upper=gr_upper(G, X),
        negative=negative_region(G, X),
        bitten_upper=bu,
        boundary=bu - lo,
    )


def is_definable(G: Granulation, X: Subset) -> bool:
    return gr_lower(G, X) == X


def is_crisp(G: Granulation, X: Subset) -> bool:
    return gr_lower(G, X) == bitten_upper(G, X)


def definable_masks(G: Granulation) -> list[int]:
    """Unions of subfamilies of granules (granularly definable sets)."""
    out = {0}
    for g in G.masks:
        out |= {m | g for m in out}
    return sorted(out)


# -- operators read straight off the tolerance --------------------------------

def tolerance_lower(T: ToleranceRelation, X: Subset) -> Subset:
    """Union of the neighbourhoods lying inside ``X``."""
    return Subset(T.universe, lower_mask(T.rows, X.mask))


def tolerance_upper(T: ToleranceRelation, X: Subset) -> Subset:
    """Union of the neighbourhoods of members of ``X``."""
    out = 0
    for i, r in enumerate(T.rows):
        if X.mask >> i & 1:
            out |= r
    return Subset(T.universe, out)


def star_lower(T: ToleranceRelation, X: Subset) -> Subset:
    """Points related to some ``y`` whose neighbourhood sits inside ``X``."""
    rows = T.rows
    inside = [y for y, r in enumerate(rows) if r & ~X.mask == 0]
    mask = sum(1 << x for x, r in enumerate(rows) if any(r >> y & 1 for y in inside))
    return Subset(T.universe, mask)


def star_upper(T: ToleranceRelation, X: Subset) -> Subset:
    """Points all of whose neighbours have neighbourhoods meeting ``X``."""
    rows = T.rows
    meeting = sum(1 << y for y, r in enumerate(rows) if r & X.mask)
    mask = sum(1 << x for x, r in enumerate(rows) if r & ~meeting == 0)
    return Subset(T.universe, mask)


def sharp(T: ToleranceRelation, X: Subset) -> Subset:
    """Points unrelated to every member of ``X`` (preclusive orthocomplement)."""
    mask = sum(1 << x for x, r in enumerate(T.rows) if r & X.mask == 0)
    return Subset(T.universe, mask)


def preclusive_lower(T: ToleranceRelation, X: Subset) -> Subset:
    return sharp(T, sharp(T, X.complement())).complement()


def preclusive_upper(T: ToleranceRelation, X: Subset) -> Subset:
    return sharp(T, sharp(T, X))


def chain_violations(T: ToleranceRelation, cap: int = DEFAULT_MAX_UNIVERSE) -> list[int]:
    """Subsets breaking ``l <= l* <= X <= u* <= u``."""
    u = T.universe
    bad = []
    for m in u.all_masks(cap):
        X = u.from_mask(m)
        chain = [tolerance_lower(T, X), star_lower(T, X), X, star_upper(T, X), tolerance_upper(T, X)]
        if not all(a <= b for a, b in zip(chain, chain[1:])):
            bad.append(m)
    return bad


# -- property table -----------------------------------------------------------

@dataclass
class PropertyReport:
    granulation_kind: str
    subsets_checked: int
    exhaustive: bool
    results: dict[str, list[tuple]] = field(default_factory=dict)

    def status(self, law: str) -> str:
        return "fails" if self.results[law] else "holds"

    @property
    def ok(self) -> bool:
        return not any(self.results.values())

    def failing(self) -> list[str]:
        return [law for law in LAW_IDS if self.results[law]]

    def render(self, universe: Universe) -> list[str]:
        lines = []
        for law in LAW_IDS:
            cex = self.results[law]
            shown = "; ".join("(" + ", ".join(universe.render(m) for m in c) + ")" for c in cex[:3])
            lines.append(f"{law:>4} {self.status(law)}" + (f"  e.g. {shown}" if cex else ""))
        return lines


def property_report(G: Granulation, exhaustive: bool = True, samples: int = DEFAULT_SAMPLES,
                    seed: int = 0, cap: int = DEFAULT_MAX_UNIVERSE,
                    max_counterexamples: int = 10) -> PropertyReport:
    """Check laws 1a-11B of the bitten property table.

    Unary laws run over every subset (or a seeded sample); binary laws over
    all pairs of those subsets.  10A/10B compare the set-theoretic notions of
    definability and crispness with their approximation characterisations,
    11A/11B closure of definable/crisp sets under union/intersection.
    """
    u = G.universe
    full = u.full_mask
    gs = G.masks
    if exhaustive:
        u.check_cap(cap)
        xs = list(range(1 << len(u)))
    else:
        rng = random.Random(seed)
        xs = sorted({rng.getrandbits(len(u)) for _ in range(samples)})

    memo_lo: dict[int, int] = {}
    memo_bu: dict[int, int] = {}

    def lo(x: int) -> int:
        if x not in memo_lo:
            memo_lo[x] = lower_mask(gs, x)
        return memo_lo[x]

    def bu(x: int) -> int:
        if x not in memo_bu:
            memo_bu[x] = upper_mask(gs, x) & ~lo(full & ~x)
        return memo_bu[x]

    def sub(a: int, b: int) -> bool:
        return a & ~b == 0

    res: dict[str, list[tuple]] = {law: [] for law in LAW_IDS}

    def fail(law: str, *witness: int) -> None:
        if len(res[law]) < max_counterexamples:
            res[law].append(witness)

    definable = set(definable_masks(G))
    if not sub(lo(0), 0):
        fail("3a", 0)
    if bu(0) != 0:
        fail("3b", 0)
    if lo(full) != full:
        fail("4a", full)
    if bu(full) != full:
        fail("4b", full)
    for x in xs:
        lx, bx = lo(x), bu(x)
        if not sub(lx, x):
            fail("1a", x)
        if not sub(x, bx):
            fail("1b", x)
        if lo(lx) != lx:
            fail("5a", x)
        if bu(bx) != bx:
            fail("5b", x)
        if not sub(lx, bu(lx)):
            fail("8a", x)
        if not sub(lo(bx), bx):
            fail("8b", x)
        if full & ~lx != bu(full & ~x):
            fail("9a", x)
        if full & ~bx != lo(full & ~x):
            fail("9b", x)
        if (x in definable) != (x == lx):
            fail("10A", x)
        crisp_by_def = lx == bx
        crisp_by_sets = x in definable and full & ~x in definable
        if crisp_by_def != crisp_by_sets:
            fail("10B", x)
    for x, y in product(xs, repeat=2):
        lx, ly, bx, by = lo(x), lo(y), bu(x), bu(y)
        if sub(x, y):
            if not sub(lx, ly):
                fail("2a", x, y)
            if not sub(bx, by):
                fail("2b", x, y)
        if not sub(lo(x & y), lx & ly):
            fail("6a", x, y)
        if not sub(bu(x & y), bx & by):
            fail("6b", x, y)
        if not sub(lx | ly, lo(x | y)):
            fail("7a", x, y)
        if not sub(bx | by, bu(x | y)):
            fail("7b", x, y)
        if x in definable and y in definable and (x | y) not in definable:
            fail("11A", x, y)
        if lx == bx and ly == by:
            for z in (x & y, x | y):
                if lo(z) != bu(z):
                    fail("11B", x, y)
    return PropertyReport(G.kind, len(xs), exhaustive, res)
