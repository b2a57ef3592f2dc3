import random

from hypothesis import given, strategies as st

from bitten.order import FinitePoset, antichain, chain, is_isomorphic, random_poset

from oracles import upsets


@st.composite
def posets(draw, max_n: int = 6):
    n = draw(st.integers(1, max_n))
    return random_poset(n, draw(st.floats(0, 1)), random.Random(draw(st.integers(0, 10**6))))


def test_chain_and_antichain_basics():
    c = chain(3)
    assert c.top() == 2 and c.bottom() == 0
    assert c.join(0, 1) == 1 and c.meet(1, 2) == 1
    a = antichain(2)
    assert a.join(0, 1) is None and a.top() is None
    assert len(c.upsets()) == 4
    assert len(a.upsets()) == 4


def test_covers_of_a_chain():
    assert chain(4).covers() == [(0, 1), (1, 2), (2, 3)]


@given(posets())
def test_upsets_match_brute_force(P):
    want = {sum(1 << i for i in U) for U in upsets(len(P), P.leq)}
    assert set(P.upsets()) == want


@given(posets())
def test_order_axioms(P):
    n = len(P)
    for a in range(n):
        assert P.leq(a, a)
        for b in range(n):
            if a != b:
                assert not (P.leq(a, b) and P.leq(b, a))
            for c in range(n):
                if P.leq(a, b) and P.leq(b, c):
                    assert P.leq(a, c)


@given(posets())
def test_covers_generate_the_order(P):
    n = len(P)
    closure = FinitePoset.from_relation(n, P.covers())
    assert all(closure.leq(a, b) == P.leq(a, b) for a in range(n) for b in range(n))


@given(posets(), st.randoms(use_true_random=False))
def test_isomorphism_is_invariant_under_relabelling(P, rnd):
    n = len(P)
    perm = list(range(n))
    rnd.shuffle(perm)
    inv = {perm[i]: i for i in range(n)}
    Q = FinitePoset.from_leq(n, lambda a, b: P.leq(inv[a], inv[b]))
    assert is_isomorphic(P, Q)
