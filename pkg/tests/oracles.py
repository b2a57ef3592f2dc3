"""Slow, obviously-correct reference implementations used as test oracles.

Everything here works on Python sets and brute-force enumeration and
shares no code with the package beyond plain data.
"""
from __future__ import annotations

from itertools import combinations


def powerset(items):
    items = list(items)
    for k in range(len(items) + 1):
        yield from (frozenset(c) for c in combinations(items, k))


def relation(n: int, pairs) -> set[tuple[int, int]]:
    R = {(i, i) for i in range(n)}
    for a, b in pairs:
        R |= {(a, b), (b, a)}
    return R


def neighbourhoods(n: int, R) -> list[frozenset[int]]:
    return [frozenset(y for y in range(n) if (x, y) in R) for x in range(n)]


def maximal_cliques(n: int, R) -> set[frozenset[int]]:
    cliques = [s for s in powerset(range(n)) if s and all((a, b) in R for a in s for b in s)]
    return {s for s in cliques if not any(s < t for t in cliques)}


def lower(granules, X) -> frozenset[int]:
    return frozenset().union(*[g for g in granules if g <= X])


def upper(granules, X) -> frozenset[int]:
    return frozenset().union(*[g for g in granules if g & X])


def bitten(granules, X, S) -> frozenset[int]:
    return upper(granules, X) - lower(granules, S - X)


def signatures(granules, S) -> dict[frozenset[int], tuple]:
    return {X: (lower(granules, X), bitten(granules, X, S)) for X in powerset(S)}


def upsets(k: int, leq) -> list[frozenset[int]]:
    return [U for U in powerset(range(k)) if all(b in U for a in U for b in range(k) if leq(a, b))]


# -- isotone map families ------------------------------------------------------

class BiteOracle:
    """Families of up-sets with the two closures and the partial ∨, ∧."""

    def __init__(self, k: int, leq):
        self.k = k
        self.K = frozenset(range(k))
        self.maps = upsets(k, leq)

    def core(self, X) -> frozenset[int]:
        out = self.K
        for f in X:
            out &= f
        return out

    def support(self, X) -> frozenset[int]:
        return frozenset().union(*X) if X else frozenset()

    def cl1(self, X):
        c = self.core(X)
        return frozenset(f for f in self.maps if c <= f)

    def cl2(self, X):
        s = self.support(X)
        return frozenset(f for f in self.maps if f <= s)

    def comp(self, X):
        return frozenset(self.maps) - X

    def c1o2(self, X) -> bool:
        return self.cl1(X) == X and self.cl2(self.comp(X)) == self.comp(X)

    def vee(self, X, Y):
        v = self.cl1(X | Y)
        return v if self.c1o2(v) else None

    def wedge(self, X, Y):
        v = self.cl1(X & Y)
        return v if self.c1o2(v) else None
