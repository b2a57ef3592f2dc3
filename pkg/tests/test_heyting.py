import pytest
from hypothesis import given

from bitten.heyting import (
    DefinableLattice,
    double_heyting_report,
    definable_sets,
    implies,
    subtract,
    union_closure,
)
from bitten.space import (
    CapExceeded,
    InputError,
    InvariantError,
    Universe,
    full_tolerance,
    identity_tolerance,
)

from conftest import tolerances


def brute_implies(D, x, y):
    good = [z for z in D.carrier if z & x & ~y == 0]
    best = [z for z in good if all(o & ~z == 0 for o in good)]
    assert len(best) == 1
    return best[0]


def brute_subtract(D, x, y):
    good = [z for z in D.carrier if x & ~(y | z) == 0]
    best = [z for z in good if all(z & ~o == 0 for o in good)]
    assert len(best) == 1
    return best[0]


def test_example_carrier(example):
    D = definable_sets(example)
    u = example.universe
    assert sorted(u.render(m) for m in D.carrier) == sorted([
        "{}", "{x2}", "{x4}", "{x1,x2}", "{x2,x3}", "{x2,x4}",
        "{x1,x2,x3}", "{x1,x2,x4}", "{x2,x3,x4}", "{x1,x2,x3,x4}"])
    assert sorted(u.render(a) for a in D.atoms()) == ["{x2}", "{x4}"]


def test_example_operations(example):
    D = definable_sets(example)
    u = example.universe
    x12, x2, x4 = u.subset(["x1", "x2"]), u.subset(["x2"]), u.subset(["x4"])
    assert implies(D, x12, x4) == x4
    assert subtract(D, x12, x2) == x12
    assert implies(D, x2, x2) == u.full()
    with pytest.raises(InputError):
        implies(D, u.subset(["x1"]), x2)


def test_example_is_double_heyting(example):
    rep = double_heyting_report(definable_sets(example))
    assert rep.ok and rep.size == 10


def test_granule_range_breaks_subtraction(example):
    rep = double_heyting_report(definable_sets(example, subtract_range="granules"))
    assert rep.failing == ["x|(x-y)=x", "(x-y)|y=x|y", "(x|y)-z=(x-z)|(y-z)", "z-(x&y)=(z-x)|(z-y)"]


def test_discrete_and_indiscrete():
    u = Universe.of(["a", "b", "c"])
    D = definable_sets(identity_tolerance(u))
    assert len(D.carrier) == 8
    for x in D.carrier:
        for y in D.carrier:
            assert D.implies(x, y) == (u.full_mask & ~x) | y
            assert D.subtract(x, y) == x & ~y
    K = definable_sets(full_tolerance(u))
    assert K.carrier == (0, u.full_mask)


def test_lattice_validation():
    u = Universe.of(["a", "b"])
    with pytest.raises(InvariantError):
        DefinableLattice(u, (1,), (0, 1))
    with pytest.raises(InvariantError):
        DefinableLattice(u, (1, 2), (0, 1, 2))
    with pytest.raises(InputError):
        DefinableLattice(u, (), (0, 3), "anything")
    with pytest.raises(CapExceeded):
        definable_sets(identity_tolerance(u), max_carrier=3)


def test_union_closure():
    assert union_closure([1, 2]) == [0, 1, 2, 3]
    assert union_closure([]) == [0]


@given(tolerances(max_n=5))
def test_operations_match_brute_force(T):
    D = definable_sets(T)
    for x in D.carrier:
        for y in D.carrier:
            assert D.implies(x, y) == brute_implies(D, x, y)
            assert D.subtract(x, y) == brute_subtract(D, x, y)


@given(tolerances(max_n=5))
def test_definable_sets_form_a_double_heyting_algebra(T):
    rep = double_heyting_report(definable_sets(T))
    assert rep.ok, rep.failing
