"""Ortho-normal covers and the bounded search behind refined bitten algebras.

A cover ``tau = (H_x)_{x in K}`` is indexed by the points of ``K``.  For a
family ``P`` of nonempty subsets covering ``K`` (a partition whose parts may
overlap) the derived family is ``B_P = {union of H_x over x in A : A in P}``.
The fourth clause asks that ``B_P`` be an antichain whose non-covered sets
are always witnessed by a pair, i.e. that ``B_P`` is the block system of a
tolerance.  ``mode="exists"`` asks this for some ``P`` (the singleton
partition is tried first, giving ``B_P = tau``); ``mode="forall"`` for every
``P``, which already fails for ``P = {{a}, K}`` whenever ``K`` has two points.
"""
from __future__ import annotations

import functools
import itertools
import operator
import random
from dataclasses import dataclass, field

import networkx as nx

from ..order import is_isomorphic
from ..quotient import QuotientPoset, build_quotient
from ..space import (
    InputError,
    Universe,
    block_masks,
    granulation,
    iter_bits,
    tolerance_from_pairs,
)
from .model import BiteAlgebra

DEFAULT_MAX_COVER_SUBFAMILIES = 1 << 16
DEFAULT_SAMPLES = 10_000


def _is_antichain(fam: list[int]) -> bool:
    u = sorted(set(fam))
    return len(u) == len(fam) and not any(a != b and a & ~b == 0 for a in u for b in u)


def _pairwise_witnessed(fam: list[int], full: int) -> bool:
    """Every set not inside a member has a two-point subset not inside a member.

    Equivalently the maximal cliques of the graph ``x ~ y iff {x, y} lies in a
    member`` are exactly the inclusion-maximal members.
    """
    n = full.bit_length()
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for m in fam:
        pts = list(iter_bits(m))
        g.add_edges_from(itertools.combinations(pts, 2))
    cliques = {sum(1 << i for i in c) for c in nx.find_cliques(g)}
    return all(any(c & ~m == 0 for m in fam) for c in cliques)


def derived_family(tau: list[int], parts: list[int]) -> list[int]:
    out = []
    for A in parts:
        u = 0
        for x in iter_bits(A):
            u |= tau[x]
        out.append(u)
    return sorted(set(out))


def index_family(family: list[int], n: int) -> list[int] | None:
    """Index a family by the points: distinct members get distinct points inside them.

    Returns ``None`` when no indexing onto the family exists.
    """
    fam = sorted(set(family))
    g = nx.Graph()
    left = [("m", i) for i in range(len(fam))]
    g.add_nodes_from(left)
    g.add_nodes_from(("p", x) for x in range(n))
    for i, m in enumerate(fam):
        for x in iter_bits(m):
            g.add_edge(("m", i), ("p", x))
    match = nx.bipartite.maximum_matching(g, top_nodes=left)
    if any(("m", i) not in match for i in range(len(fam))):
        return None
    tau = [0] * n
    for i in range(len(fam)):
        tau[match[("m", i)][1]] = fam[i]
    for x in range(n):
        if tau[x] == 0:
            tau[x] = next((m for m in fam if m >> x & 1), fam[0] if fam else 0)
    return tau


@dataclass
class OrthoNormalCoverWitness:
    tau: list[int]
    mode: str
    covers_points: bool
    union_is_all: bool
    antichain: bool
    partition_clause: bool
    partition: list[int] | None = None
    derived: list[int] = field(default_factory=list)
    partitions_checked: int = 0
    exhaustive: bool = True

    @property
    def ok(self) -> bool:
        return self.covers_points and self.union_is_all and self.antichain and self.partition_clause

    def clauses(self) -> dict[str, bool]:
        return {"covers points": self.covers_points, "union is K": self.union_is_all,
                "antichain": self.antichain, "partition clause": self.partition_clause}


def _union(masks) -> int:
    return functools.reduce(operator.or_, masks, 0)


def _covers(n: int, max_subfamilies: int, samples: int, seed: int):
    """Families of nonempty subsets whose union is everything; sampled above the cap."""
    full = (1 << n) - 1
    nonempty = list(range(1, full + 1))
    if (1 << len(nonempty)) <= max_subfamilies:
        for k in range(1 << len(nonempty)):
            fam = [nonempty[i] for i in iter_bits(k)]
            if fam and _union(fam) == full:
                yield fam
        return
    rng = random.Random(seed)
    for _ in range(samples):
        fam = [m for m in nonempty if rng.random() < 0.5]
        missing = full & ~_union(fam)
        fam += [1 << x for x in iter_bits(missing)]
        yield sorted(set(fam))


def is_ortho_normal_cover(tau: list[int], n: int, mode: str = "exists",
                          max_subfamilies: int = DEFAULT_MAX_COVER_SUBFAMILIES,
                          samples: int = DEFAULT_SAMPLES, seed: int = 0) -> OrthoNormalCoverWitness:
    """Check the four ortho-normal clauses for ``tau`` indexed by ``range(n)``."""
    if mode not in ("exists", "forall"):
        raise InputError("mode must be 'exists' or 'forall'")
    if len(tau) != n:
        raise InputError(f"tau must have one member per point ({n}), got {len(tau)}")
    full = (1 << n) - 1
    union = _union(tau)
    covers = all(any(m >> x & 1 for m in tau) for x in range(n))
    anti = _is_antichain(sorted(set(tau)))
    w = OrthoNormalCoverWitness(list(tau), mode, covers, union == full, anti, False)

    def good(parts):
        B = derived_family(tau, parts)
        return _is_antichain(B) and _pairwise_witnessed(B, full), B

    singletons = [1 << x for x in range(n)]
    ok, B = good(singletons)
    w.partitions_checked = 1
    if mode == "exists" and ok:
        w.partition_clause, w.partition, w.derived = True, singletons, B
        return w
    exhaustive = (1 << full) <= max_subfamilies
    w.exhaustive = exhaustive
    if mode == "forall" and not ok:
        w.partition, w.derived = singletons, B
        return w
    for parts in _covers(n, max_subfamilies, samples, seed):
        w.partitions_checked += 1
        ok, B = good(parts)
        if mode == "exists" and ok:
            w.partition_clause, w.partition, w.derived = True, parts, B
            return w
        if mode == "forall" and not ok:
            w.partition, w.derived = parts, B
            return w
    w.partition_clause = mode == "forall"
    return w


# -- refined algebras -------------------------------------------------------------

@dataclass
class RefinedReport:
    h0: list[int]
    h: list[int]
    outcome: str  # "witness", "exhausted", "search bound exceeded", "vacuous"
    candidates: int = 0
    witness_pairs: list[tuple[int, int]] | None = None
    witness_blocks: list[int] | None = None
    ortho: OrthoNormalCoverWitness | None = None

    @property
    def found(self) -> bool:
        return self.outcome == "witness"


def granule_classes(Q: QuotientPoset) -> tuple[list[int], list[int]]:
    """``H0`` and ``H`` computed on the quotient that the algebra transports.

    ``H0`` is the set of minimal ``◆x`` over C1O2 elements with ``𝔏x`` above
    the class of the empty set; ``H`` collects the ``x`` of that same range
    with ``◆x`` in ``H0``.
    """
    P = Q.poset
    rng = [c for c in range(len(Q)) if Q.L[c] != Q.bottom]
    dia = {Q.diamond[c] for c in rng}
    h0 = sorted(d for d in dia if not any(e != d and P.leq(e, d) for e in dia))
    h = sorted(c for c in rng if Q.diamond[c] in h0)
    return h0, h


def quotient_ops(Q: QuotientPoset) -> dict[str, tuple]:
    return {"L": Q.L, "diamond": Q.diamond, "neg": Q.neg}


def _graphs(m: int):
    pairs = list(itertools.combinations(range(m), 2))
    seen: list[nx.Graph] = []
    for bits in range(1 << len(pairs)):
        g = nx.Graph()
        g.add_nodes_from(range(m))
        g.add_edges_from(p for i, p in enumerate(pairs) if bits >> i & 1)
        if any(nx.faster_could_be_isomorphic(g, h) and nx.is_isomorphic(g, h) for h in seen):
            continue
        seen.append(g)
        yield sorted(g.edges)


def refined_check(model: BiteAlgebra, max_universe: int = 6, kind: str | None = None) -> RefinedReport:
    """Look for a tolerance space on ``|H|`` points whose bitten algebra matches ``model``.

    Two bitten algebras built from quotients are isomorphic when the
    quotients are, as ordered sets carrying ``L``, ``◆`` and ``¬``.  Tolerances
    are enumerated up to graph isomorphism.
    """
    Q = model.quotient
    kind = kind or Q.granulation.kind
    h0, h = granule_classes(Q)
    if not h:
        return RefinedReport(h0, h, "vacuous")
    m = len(h)
    if m > max_universe:
        return RefinedReport(h0, h, "search bound exceeded")
    names = [f"p{i + 1}" for i in range(m)]
    u = Universe.of(names)
    target_ops = quotient_ops(Q)
    count = 0
    for edges in _graphs(m):
        count += 1
        T = tolerance_from_pairs(u, [(names[a], names[b]) for a, b in edges])
        R = build_quotient(granulation(T, kind))
        if len(R) != len(Q):
            continue
        if is_isomorphic(R.poset, Q.poset, quotient_ops(R), target_ops):
            blocks = block_masks(T)
            tau = index_family(blocks, m)
            ortho = is_ortho_normal_cover(tau, m) if tau is not None else None
            return RefinedReport(h0, h, "witness", count, edges, blocks, ortho)
    return RefinedReport(h0, h, "exhausted", count)

