import pytest
from hypothesis import given

from bitten.quotient import build_quotient
from bitten.sgba import (
    ChoiceFunction,
    all_choices,
    forced_value_violations,
    lb_max,
    make_choice,
    minimal_granule_classes,
    reconstruction_probe,
    sgba_law_report,
    sgba_model,
    ub_min,
)
from bitten.space import InputError, InvariantError, Universe, granulation, tolerance_from_pairs

from conftest import tolerances


@pytest.fixture(scope="module")
def example_q():
    from bitten.space import example_space
    return build_quotient(granulation(example_space()))


@pytest.fixture(scope="module")
def branching_q():
    # a quotient where several bound sets have more than one element
    u = Universe.of(["x1", "x2", "x3", "x4", "x5"])
    T = tolerance_from_pairs(u, [("x1", "x3"), ("x1", "x4"), ("x2", "x3"), ("x2", "x5")])
    return build_quotient(granulation(T))


def test_example_bound_sets(example_q):
    assert ub_min(example_q, 1, 4) == {2}
    assert lb_max(example_q, 2, 7) == {0}
    assert minimal_granule_classes(example_q) == {3, 5, 7}


def test_example_has_a_single_choice(example_q):
    assert make_choice(example_q).free_cells() == []
    assert len(list(all_choices(example_q))) == 1
    for mode in ("minimal", "cone"):
        assert sgba_law_report(sgba_model(make_choice(example_q, mode=mode))).ok


def test_free_cells_and_seeds(branching_q):
    c = make_choice(branching_q)
    assert len(c.free_cells()) == 4
    a = make_choice(branching_q, seed=5)
    assert a.table == make_choice(branching_q, seed=5).table
    tables = {tuple(sorted((tuple(sorted(k)), v) for k, v in make_choice(branching_q, seed=s).table.items()))
              for s in range(20)}
    assert len(tables) > 1


def test_every_choice_gives_an_algebra(branching_q):
    models = [sgba_model(c) for c in all_choices(branching_q)]
    assert len(models) == 16
    for M in models:
        rep = sgba_law_report(M)
        assert rep.ok, rep.failing
    assert forced_value_violations(branching_q, models) == []


def test_cone_mode(branching_q):
    M = sgba_model(make_choice(branching_q, seed=2, mode="cone"))
    assert sgba_law_report(M).ok


def test_choice_validation(example_q):
    c = make_choice(example_q)
    bad = dict(c.table)
    bad[frozenset([0])] = 1
    with pytest.raises(InvariantError):
        ChoiceFunction(example_q, bad)
    with pytest.raises(InputError):
        make_choice(example_q, rule="largest")
    with pytest.raises(InputError):
        c([0, 13, 5])


def test_probe(example_q, branching_q):
    assert reconstruction_probe([]).blocks == "nothing recoverable"
    p = reconstruction_probe([sgba_model(make_choice(example_q))])
    assert p.order_matches and p.blocks == "not established"
    assert p.minimal_granules == minimal_granule_classes(example_q)
    models = [sgba_model(c) for c in all_choices(branching_q)]
    assert reconstruction_probe(models).order_matches


@given(tolerances(max_n=5))
def test_random_quotients_satisfy_every_item(T):
    Q = build_quotient(granulation(T))
    M = sgba_model(make_choice(Q, seed=0))
    rep = sgba_law_report(M)
    assert rep.ok, rep.failing
    p = reconstruction_probe([M])
    assert p.order_matches
