"""Generalised cover approximations (AU/AI rough sets) and the bridge to bitten ones.

A cover system is any finite list ``K_1..K_n`` of subsets, with the implicit
conventions ``K_0 = {}`` and ``K_{n+1} = S``.  ``u1`` and ``l2`` quantify over
index families ``I`` drawn from ``{1, ..., n+1}`` and are evaluated by literal
enumeration, so they are capped.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .approx import lower_mask, upper_mask
from .space import (
    DEFAULT_MAX_UNIVERSE,
    CapExceeded,
    Granulation,
    InputError,
    Subset,
    Universe,
    iter_bits,
)

MAX_COVERS = 16


@dataclass(frozen=True)
class CoverSystem:
    universe: Universe
    covers: tuple[int, ...]

    @classmethod
    def from_granulation(cls, G: Granulation) -> "CoverSystem":
        return cls(G.universe, G.masks)

    @classmethod
    def from_names(cls, u: Universe, covers) -> "CoverSystem":
        return cls(u, tuple(u.mask_of(c) for c in covers))

    def indexed(self) -> list[int]:
        """``K_1 .. K_{n+1}`` with the trailing ``K_{n+1} = S``."""
        return list(self.covers) + [self.universe.full_mask]

    def check_cap(self, max_covers: int = MAX_COVERS) -> None:
        if len(self.covers) > max_covers:
            raise CapExceeded(f"{len(self.covers)} covers exceed subfamily cap {max_covers}")


def _x(C: CoverSystem, X: Subset) -> int:
    if X.universe != C.universe:
        raise InputError("subset and cover system live on different universes")
    return X.mask


def l1_mask(C: CoverSystem, x: int) -> int:
    # K_0 = {} contributes nothing
    out = 0
    for k in C.covers:
        if k & ~x == 0:
            out |= k
    return out


def l2_mask(C: CoverSystem, x: int, max_covers: int = MAX_COVERS) -> int:
    C.check_cap(max_covers)
    full = C.universe.full_mask
    comps = [full & ~k for k in C.indexed()]
    out = 0
    for fam in range(1 << len(comps)):
        inter = full
        for i in iter_bits(fam):
            inter &= comps[i]
        if inter & ~x == 0:
            out |= inter
    return out


def u1_mask(C: CoverSystem, x: int, max_covers: int = MAX_COVERS) -> int:
    C.check_cap(max_covers)
    ks = C.indexed()
    out = C.universe.full_mask
    for fam in range(1 << len(ks)):
        union = 0
        for i in iter_bits(fam):
            union |= ks[i]
        if x & ~union == 0:
            out &= union
    return out


def u2_mask(C: CoverSystem, x: int) -> int:
    full = C.universe.full_mask
    out = full  # K_0 = {} always qualifies
    for k in C.covers:
        if x & k == 0:
            out &= full & ~k
    return out


def l1(C: CoverSystem, X: Subset) -> Subset:
    return Subset(C.universe, l1_mask(C, _x(C, X)))


def l2(C: CoverSystem, X: Subset, max_covers: int = MAX_COVERS) -> Subset:
    return Subset(C.universe, l2_mask(C, _x(C, X), max_covers))


def u1(C: CoverSystem, X: Subset, max_covers: int = MAX_COVERS) -> Subset:
    return Subset(C.universe, u1_mask(C, _x(C, X), max_covers))


def u2(C: CoverSystem, X: Subset) -> Subset:
    return Subset(C.universe, u2_mask(C, _x(C, X)))


def au_rough(C: CoverSystem, X: Subset) -> tuple[Subset, Subset]:
    return l1(C, X), u1(C, X)


def ai_rough(C: CoverSystem, X: Subset) -> tuple[Subset, Subset]:
    return l2(C, X), u2(C, X)


@dataclass
class BridgeReport:
    granulation_kind: str
    subsets_checked: int
    partition: bool
    counterexamples: dict[str, list[int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.counterexamples.values())


BRIDGE_CLAIMS = ("l1=lower", "u1<=upper", "bitten=upper&u2", "u1=upper(partition)")


def bridge_check(G: Granulation, exhaustive: bool = True, samples: int = 1024, seed: int = 0,
                 cap: int = DEFAULT_MAX_UNIVERSE, max_covers: int = MAX_COVERS) -> BridgeReport:
    """Compare the cover operators of ``K = Gr(S)`` with the granular ones.

    The fourth claim (``u1`` equals the upper approximation) is only asserted
    when the granules are pairwise disjoint.
    """
    u = G.universe
    C = CoverSystem.from_granulation(G)
    C.check_cap(max_covers)
    full = u.full_mask
    if exhaustive:
        u.check_cap(cap)
        xs = range(1 << len(u))
    else:
        rng = random.Random(seed)
        xs = sorted({rng.getrandbits(len(u)) for _ in range(samples)})
    part = G.is_partition()
    cex: dict[str, list[int]] = {c: [] for c in BRIDGE_CLAIMS}
    n = 0
    for x in xs:
        n += 1
        lo = lower_mask(G.masks, x)
        up = upper_mask(G.masks, x)
        bu = up & ~lower_mask(G.masks, full & ~x)
        u1x = u1_mask(C, x, max_covers)
        if l1_mask(C, x) != lo:
            cex["l1=lower"].append(x)
        if u1x & ~up:
            cex["u1<=upper"].append(x)
        if bu != up & u2_mask(C, x):
            cex["bitten=upper&u2"].append(x)
        if part and u1x != up:
            cex["u1=upper(partition)"].append(x)
    return BridgeReport(G.kind, n, part, cex)
