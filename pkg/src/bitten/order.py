"""Finite posets on ``range(n)`` with bitmask cones.

``up[i]`` is the mask of all ``j`` with ``i <= j`` (reflexive); ``down[i]``
the mask of all ``j <= i``.  Up-sets of the poset double as the isotone maps
into the two-element chain.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Sequence

import networkx as nx

from .space import CapExceeded, InvariantError, iter_bits, popcount

DEFAULT_MAX_UPSETS = 1 << 20


@dataclass(frozen=True)
class FinitePoset:
    up: tuple[int, ...]

    def __post_init__(self):
        n = len(self.up)
        for i, u in enumerate(self.up):
            if not u >> i & 1:
                raise InvariantError("order not reflexive")
            for j in iter_bits(u):
                if j >= n:
                    raise InvariantError("cone mentions unknown element")
                if j != i and self.up[j] >> i & 1:
                    raise InvariantError("order not antisymmetric")
                if self.up[j] & ~u:
                    raise InvariantError("order not transitive")

    @classmethod
    def from_leq(cls, n: int, leq: Callable[[int, int], bool]) -> "FinitePoset":
        return cls(tuple(sum(1 << j for j in range(n) if leq(i, j)) for i in range(n)))

    @classmethod
    def from_relation(cls, n: int, pairs: Sequence[tuple[int, int]]) -> "FinitePoset":
        """Reflexive-transitive closure of the given ``(a, b)`` meaning ``a <= b``."""
        up = [1 << i for i in range(n)]
        for a, b in pairs:
            up[a] |= 1 << b
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = up[i]
                for j in iter_bits(up[i]):
                    acc |= up[j]
                if acc != up[i]:
                    up[i] = acc
                    changed = True
        return cls(tuple(up))

    def __len__(self) -> int:
        return len(self.up)

    @property
    def full(self) -> int:
        return (1 << len(self.up)) - 1

    @cached_property
    def down(self) -> tuple[int, ...]:
        n = len(self.up)
        return tuple(sum(1 << j for j in range(n) if self.up[j] >> i & 1) for i in range(n))

    def leq(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def up_closure(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.up[i]
        return out

    def down_closure(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.down[i]
        return out

    def is_upset(self, mask: int) -> bool:
        return self.up_closure(mask) == mask

    def is_downset(self, mask: int) -> bool:
        return self.down_closure(mask) == mask

    def minimal(self, mask: int) -> int:
        return sum(1 << i for i in iter_bits(mask) if self.down[i] & mask == 1 << i)

    def maximal(self, mask: int) -> int:
        return sum(1 << i for i in iter_bits(mask) if self.up[i] & mask == 1 << i)

    def upper_bounds(self, a: int, b: int) -> int:
        return self.up[a] & self.up[b]

    def lower_bounds(self, a: int, b: int) -> int:
        return self.down[a] & self.down[b]

    def join(self, a: int, b: int) -> int | None:
        """Least upper bound, or ``None`` when it does not exist."""
        ub = self.upper_bounds(a, b)
        for c in iter_bits(ub):
            if self.up[c] & ub == ub:
                return c
        return None

    def meet(self, a: int, b: int) -> int | None:
        lb = self.lower_bounds(a, b)
        for c in iter_bits(lb):
            if self.down[c] & lb == lb:
                return c
        return None

    def top(self) -> int | None:
        m = self.maximal(self.full)
        return m.bit_length() - 1 if popcount(m) == 1 else None

    def bottom(self) -> int | None:
        m = self.minimal(self.full)
        return m.bit_length() - 1 if popcount(m) == 1 else None

    def covers(self) -> list[tuple[int, int]]:
        """Hasse edges ``(a, b)``: ``a < b`` with nothing strictly between."""
        edges = []
        for a, u in enumerate(self.up):
            strict = u & ~(1 << a)
            above = 0
            for c in iter_bits(strict):
                above |= self.up[c] & ~(1 << c)
            edges.extend((a, b) for b in iter_bits(strict & ~above))
        return edges

    def linear_extension(self) -> list[int]:
        return sorted(range(len(self.up)), key=lambda i: popcount(self.down[i]))

    def iter_upsets(self, cap: int = DEFAULT_MAX_UPSETS) -> Iterator[int]:
        """All up-closed subsets (isotone maps into {0 < 1}), including empty and full."""
        order = self.linear_extension()[::-1]  # tops first
        up, down = self.up, self.down
        count = 0

        def rec(k: int, chosen: int, excluded: int) -> Iterator[int]:
            nonlocal count
            if k == len(order):
                count += 1
                if count > cap:
                    raise CapExceeded(f"more than {cap} up-sets")
                yield chosen
                return
            i = order[k]
            if excluded >> i & 1:
                yield from rec(k + 1, chosen, excluded)
                return
            if up[i] & ~(1 << i) & ~chosen == 0:
                yield from rec(k + 1, chosen | 1 << i, excluded)
            yield from rec(k + 1, chosen, excluded | down[i])

        yield from rec(0, 0, 0)

    def upsets(self, cap: int = DEFAULT_MAX_UPSETS) -> list[int]:
        return sorted(self.iter_upsets(cap), key=lambda m: (popcount(m), m))

    def to_digraph(self, unary: dict[str, Sequence[int | None]] | None = None) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(len(self.up)))
        for a, u in enumerate(self.up):
            for b in iter_bits(u):
                g.add_edge(a, b, ops={"leq"})
        for name, table in (unary or {}).items():
            for a, b in enumerate(table):
                if b is None:
                    continue
                if g.has_edge(a, b):
                    g[a][b]["ops"] = g[a][b]["ops"] | {name}
                else:
                    g.add_edge(a, b, ops={name})
        return g


def is_isomorphic(p: FinitePoset, q: FinitePoset,
                  p_ops: dict[str, Sequence[int | None]] | None = None,
                  q_ops: dict[str, Sequence[int | None]] | None = None) -> bool:
    """Order isomorphism that also commutes with the named unary operations."""
    if len(p) != len(q):
        return False
    gp, gq = p.to_digraph(p_ops), q.to_digraph(q_ops)
    return nx.is_isomorphic(gp, gq, edge_match=lambda a, b: a["ops"] == b["ops"])


def chain(n: int) -> FinitePoset:
    return FinitePoset.from_leq(n, lambda i, j: i <= j)


def antichain(n: int) -> FinitePoset:
    return FinitePoset.from_leq(n, lambda i, j: i == j)


def random_poset(n: int, density: float, rng: random.Random) -> FinitePoset:
    """Transitive closure of a random DAG whose edges respect ``0 < 1 < ... < n-1``."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return FinitePoset.from_relation(n, pairs)
