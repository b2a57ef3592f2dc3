"""Isotone maps into {0 < 1}, the two closure systems they carry, and sigma.

An isotone map ``K -> {0, 1}`` is identified with the up-set it sends to 1.
``K*`` is enumerated once into a fixed list, and a family of maps (a subset
of ``K*``) is an ``int`` bitmask over that list.  Closures are always taken
relative to an ambient family ``A``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from ..order import DEFAULT_MAX_UPSETS, FinitePoset
from ..space import InputError, iter_bits, popcount


@dataclass(frozen=True)
class IsotoneMap:
    poset: FinitePoset = field(repr=False)
    upset: int

    def __post_init__(self):
        if not self.poset.is_upset(self.upset):
            raise InputError(f"{self.upset:#x} is not an up-set")

    def __call__(self, p: int) -> int:
        return self.upset >> p & 1


class KStar:
    """All isotone maps of a finite poset, in a fixed order (by size, then mask)."""

    def __init__(self, poset: FinitePoset, cap: int = DEFAULT_MAX_UPSETS):
        self.poset = poset
        self.upsets: tuple[int, ...] = tuple(poset.upsets(cap))
        self.index = {m: i for i, m in enumerate(self.upsets)}
        self.all = (1 << len(self.upsets)) - 1

    def __len__(self) -> int:
        return len(self.upsets)

    def maps(self, family: int) -> Iterator[IsotoneMap]:
        for i in iter_bits(family):
            yield IsotoneMap(self.poset, self.upsets[i])

    def family(self, upsets) -> int:
        return sum(1 << self.index[u] for u in upsets)

    @cached_property
    def constants(self) -> int:
        """Family holding the constant-0 and constant-1 maps."""
        return self.family([0, self.poset.full])

    @cached_property
    def _up(self) -> tuple[int, ...]:
        return tuple(sum(1 << i for i, u in enumerate(self.upsets) if u >> p & 1)
                     for p in range(len(self.poset)))

    def up(self, p: int, A: int | None = None) -> int:
        """Maps in ``A`` sending ``p`` to 1."""
        return self._up[p] & (self.all if A is None else A)

    def lo(self, p: int, A: int | None = None) -> int:
        return ~self._up[p] & (self.all if A is None else A)

    def containing(self, P: int, A: int | None = None) -> int:
        """Maps in ``A`` whose up-set includes the point set ``P``."""
        out = self.all if A is None else A
        for p in iter_bits(P):
            out &= self._up[p]
        return out

    def avoiding(self, Q: int, A: int | None = None) -> int:
        out = self.all if A is None else A
        for q in iter_bits(Q):
            out &= ~self._up[q]
        return out

    def core(self, family: int) -> int:
        """Points sent to 1 by every map of the family (all of K for the empty family)."""
        out = self.poset.full
        for i in iter_bits(family):
            out &= self.upsets[i]
        return out

    def support(self, family: int) -> int:
        """Points sent to 1 by some map of the family."""
        out = 0
        for i in iter_bits(family):
            out |= self.upsets[i]
        return out


def enumerate_kstar(K: FinitePoset, cap: int = DEFAULT_MAX_UPSETS) -> KStar:
    return KStar(K, cap)


def up(ks: KStar, p: int, A: int | None = None) -> int:
    return ks.up(p, A)


def lo(ks: KStar, p: int, A: int | None = None) -> int:
    return ks.lo(p, A)


def a_ideal(ks: KStar, A: int) -> int:
    """Intersection over ``x`` in ``A`` of ``x^-1{0}``; all of K when A is empty."""
    return ks.poset.full & ~ks.support(A)


def a_filter(ks: KStar, A: int) -> int:
    return ks.core(A)


def is_A_ideal(ks: KStar, F: int, A: int) -> bool:
    return F == a_ideal(ks, A)


def is_A_filter(ks: KStar, F: int, A: int) -> bool:
    return F == a_filter(ks, A)


def is_full(ks: KStar, A: int) -> bool:
    """For every ``p`` not below ``q`` some map in A is 1 at p and 0 at q."""
    K = ks.poset
    for p in range(len(K)):
        for q in range(len(K)):
            if not K.leq(p, q) and not ks.up(p, A) & ks.lo(q, A):
                return False
    return True


def is_separating(ks: KStar, A: int) -> bool:
    """Every nonempty down-set disjoint from a nonempty up-set is split by a map in A.

    For a filter ``F`` the largest disjoint ideal is ``K \\ F``, and a map that
    separates it from ``F`` separates every smaller ideal too, so only that
    pair is tested.  Filters range over the up-sets already listed in ``K*``.
    """
    full = ks.poset.full
    for F in ks.upsets:
        I = full & ~F
        if F == 0 or I == 0:
            continue
        if not ks.containing(F, A) & ks.avoiding(I, A):
            return False
    return True


def cl1(ks: KStar, X: int, A: int | None = None) -> int:
    """Intersection of the ``UP_A(p)`` containing X; A itself when there are none."""
    A = ks.all if A is None else A
    return ks.containing(ks.core(X), A)


def cl2(ks: KStar, X: int, A: int | None = None) -> int:
    A = ks.all if A is None else A
    return ks.avoiding(ks.poset.full & ~ks.support(X), A)


def is_c1o2(ks: KStar, X: int, A: int | None = None) -> bool:
    A = ks.all if A is None else A
    if X & ~A:
        return False
    return cl1(ks, X, A) == X and cl2(ks, A & ~X, A) == A & ~X


def c1o2_sets(ks: KStar, A: int | None = None) -> list[int]:
    """All C1-closed, C2-open subfamilies of A.

    Every C1-closed set is ``{f in A : P <= f}`` for some point set P, and P
    may be taken up-closed, so the candidates are indexed by ``K*`` itself.
    """
    A = ks.all if A is None else A
    cands = {ks.containing(P, A) for P in ks.upsets}
    return sorted((c for c in cands if is_c1o2(ks, c, A)), key=lambda m: (popcount(m), m))


def sigma(ks: KStar, p: int, A: int | None = None) -> int:
    return ks.up(p, A)


@dataclass
class RepresentationReport:
    size: int
    family_size: int
    full: bool
    separating: bool
    isotone: bool
    injective: bool
    surjective: bool
    order_embedding: bool
    c1o2_count: int

    @property
    def isomorphism(self) -> bool:
        return self.isotone and self.injective and self.surjective and self.order_embedding

    @property
    def theorem_violations(self) -> list[str]:
        bad = []
        if not self.isotone:
            bad.append("sigma not isotone")
        if self.full and not self.injective:
            bad.append("full but sigma not injective")
        if self.separating and not self.surjective:
            bad.append("separating but sigma not onto C1O2")
        if self.full and self.separating and not self.isomorphism:
            bad.append("full and separating but no order isomorphism")
        return bad


def representation_check(ks: KStar, A: int | None = None) -> RepresentationReport:
    A = ks.all if A is None else A
    K = ks.poset
    n = len(K)
    img = [sigma(ks, p, A) for p in range(n)]
    isotone = all(img[p] & ~img[q] == 0 for p in range(n) for q in range(n) if K.leq(p, q))
    embedding = all((img[p] & ~img[q] == 0) == K.leq(p, q) for p in range(n) for q in range(n))
    targets = set(c1o2_sets(ks, A))
    return RepresentationReport(
        size=n,
        family_size=popcount(A),
        full=is_full(ks, A),
        separating=is_separating(ks, A),
        isotone=isotone,
        injective=len(set(img)) == n,
        surjective=targets <= set(img) and set(img) <= targets,
        order_embedding=embedding,
        c1o2_count=len(targets),
    )
