import pytest
from hypothesis import given, strategies as st

from bitten.bitealg.model import build_bite
from bitten.bitealg.ortho import (
    derived_family,
    granule_classes,
    index_family,
    is_ortho_normal_cover,
    refined_check,
)
from bitten.quotient import build_quotient
from bitten.space import InputError, Universe, block_masks, granulation, identity_tolerance

from conftest import tolerances


@pytest.fixture(scope="module")
def example_bite():
    from bitten.space import example_space
    return build_bite(build_quotient(granulation(example_space())))


def test_example_granule_classes(example_bite):
    h0, h = granule_classes(example_bite.quotient)
    assert h0 == [6, 7]
    assert h == [3, 5, 6, 7]


def test_example_refined_witness(example_bite):
    r = refined_check(example_bite)
    assert r.found
    # a three-point path plus an isolated point reproduces the decorated quotient
    assert r.witness_pairs == [(0, 1), (0, 2)]
    assert sorted(r.witness_blocks) == [3, 5, 8]
    assert r.ortho is not None and r.ortho.ok


def test_refined_bound_and_trivial_cases(example_bite):
    assert refined_check(example_bite, max_universe=3).outcome == "search bound exceeded"
    one = build_bite(build_quotient(granulation(identity_tolerance(Universe.of(["a"])))))
    r = refined_check(one)
    assert r.h == [1] and r.found


def test_singletons_are_an_ortho_normal_cover():
    w = is_ortho_normal_cover([1, 2, 4], 3)
    assert w.ok and w.partition == [1, 2, 4] and w.partitions_checked == 1


def test_every_partition_fails_beyond_one_point():
    w = is_ortho_normal_cover([1, 2, 4], 3, mode="forall")
    assert not w.partition_clause
    assert is_ortho_normal_cover([1], 1, mode="forall").ok


def test_clause_failures():
    w = is_ortho_normal_cover([1, 3, 4], 3)
    assert not w.antichain and not w.ok
    w = is_ortho_normal_cover([1, 2, 0], 3)
    assert not w.covers_points and not w.union_is_all
    # triangle edges: singletons fail, merging everything succeeds
    w = is_ortho_normal_cover([3, 5, 6], 3)
    assert w.ok and w.derived == [7] and w.exhaustive
    with pytest.raises(InputError):
        is_ortho_normal_cover([1, 2], 3)
    with pytest.raises(InputError):
        is_ortho_normal_cover([1], 1, mode="some")


def test_sampling_above_the_cap():
    w = is_ortho_normal_cover([1] * 5, 5, samples=50)
    assert not w.exhaustive and w.partitions_checked == 51 and not w.ok


def test_index_family():
    assert index_family([1, 2, 3], 2) is None
    tau = index_family([3, 6], 3)
    assert tau is not None and sorted(set(tau)) == [3, 6]
    assert derived_family([3, 6, 6], [1, 6]) == [3, 6]


@given(tolerances(max_n=5))
def test_blocks_of_a_tolerance_index_into_a_cover(T):
    n = len(T.universe)
    blocks = block_masks(T)
    tau = index_family(blocks, n)
    if len(blocks) <= n:
        assert tau is not None
        w = is_ortho_normal_cover(tau, n)
        assert w.covers_points and w.union_is_all and w.antichain and w.partition_clause
    else:
        assert tau is None
