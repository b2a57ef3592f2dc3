from itertools import combinations

import pytest
from hypothesis import given

from bitten.cover import CoverSystem, bridge_check, l1, l2, u1, u2
from bitten.space import CapExceeded, Universe, granulation

from conftest import tolerances
from oracles import powerset


def families(covers):
    for k in range(len(covers) + 1):
        yield from combinations(covers, k)


def oracle(covers, S, X):
    """Union/intersection cover approximations with K_0 = {} and K_{n+1} = S."""
    ks = list(covers) + [S]
    l1 = frozenset().union(*[k for k in covers if k <= X])
    unions = [frozenset().union(*f) for f in families(ks)]
    u1 = S.intersection(*[v for v in unions if X <= v])
    comps = [S - k for k in ks]
    inters = [S.intersection(*f) for f in families(comps)]
    l2 = frozenset().union(*[v for v in inters if v <= X])
    u2 = S.intersection(*[S - k for k in covers if not k & X])
    return l1, u1, l2, u2


def as_set(sub):
    u = sub.universe
    return frozenset(u.index(x) for x in sub)


@given(tolerances(max_n=4))
def test_cover_operators_match_definitions(T):
    G = granulation(T)
    C = CoverSystem.from_granulation(G)
    u = T.universe
    S = frozenset(range(len(u)))
    covers = [frozenset(i for i in S if m >> i & 1) for m in G.masks]
    for X in powerset(S):
        sub = u.from_mask(sum(1 << i for i in X))
        want = oracle(covers, S, X)
        got = tuple(as_set(f(C, sub)) for f in (l1, u1, l2, u2))
        assert got == want


def test_example_cover_values(example):
    C = CoverSystem.from_granulation(granulation(example))
    u = example.universe
    X = u.subset(["x2"])
    assert str(l1(C, X)) == "{}"
    assert str(u2(C, X)) == "{x1,x2,x3}"


@given(tolerances(max_n=5))
def test_bridge_claims(T):
    for kind in ("t-relateds", "blocks", "block-intersections"):
        rep = bridge_check(granulation(T, kind))
        assert rep.ok, rep.counterexamples


def test_cover_cap_is_enforced():
    u = Universe.of([f"x{i}" for i in range(5)])
    C = CoverSystem(u, tuple(range(1, 32)))
    with pytest.raises(CapExceeded):
        u1(C, u.full())
