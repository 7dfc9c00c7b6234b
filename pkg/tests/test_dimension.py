"""Dimension computation against hand-frozen brute-force values.

The frozen integers below were produced by a standalone exhaustive
shattering search written directly from the tree definitions, kept
outside the package so the two implementations share no code.
"""

import numpy as np
import pytest

from robust_online import (
    EMPTY_DIM,
    HypothesisClass,
    PerturbationMap,
    VersionSpace,
    adversarial_dimension,
    classic_littlestone_dimension,
    dimension_of,
    full_class,
    identity_map,
    is_shattered,
    restrict,
    total_map,
    witness_tree,
)
from robust_online.dimension import AtLeast, path_realizable
from robust_online.errors import DomainError

# 3 instances, 5 hypotheses, mixed overlap; frozen: dim 1 here,
# dim 2 under identity, dim 1 under the total map
HC5 = HypothesisClass.from_tables(
    [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 1)]
)
U5 = PerturbationMap.from_sets([{0, 1}, {1}, {1, 2}])


def test_singleton_class_has_dimension_zero():
    hc = HypothesisClass.from_tables([(0, 1, 0)])
    assert adversarial_dimension(hc, total_map(3)) == 0


def test_empty_version_space_sentinel():
    hc = full_class(2)
    u = identity_map(2)
    v = restrict(restrict(VersionSpace.full(hc), 0, 0, u), 0, 1, u)
    assert v.is_empty
    assert dimension_of(v, u) == EMPTY_DIM


def test_identity_full_class_three_points():
    hc = full_class(3)
    u = identity_map(3)
    assert adversarial_dimension(hc, u) == 3
    assert classic_littlestone_dimension(hc) == 3


def test_total_map_constant_pair():
    hc = HypothesisClass.from_tables([(0, 0, 0), (1, 1, 1)])
    assert adversarial_dimension(hc, total_map(3)) == 1


def test_frozen_mixed_overlap_scenario():
    assert adversarial_dimension(HC5, U5) == 1
    assert adversarial_dimension(HC5, identity_map(3)) == 2
    assert adversarial_dimension(HC5, total_map(3)) == 1


def test_identity_specialization_matches_classic():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 5))
        count = int(rng.integers(2, 9))
        tables = {tuple(int(v) for v in rng.integers(0, 2, n)) for _ in range(count)}
        hc = HypothesisClass.from_tables(sorted(tables))
        assert adversarial_dimension(hc, identity_map(n)) == (
            classic_littlestone_dimension(hc)
        )


def test_classic_thresholds_on_seven_points():
    tables = [tuple(1 if x >= k else 0 for x in range(7)) for k in range(8)]
    hc = HypothesisClass.from_tables(tables)
    assert classic_littlestone_dimension(hc) == 3


def test_classic_full_classes():
    for n in range(1, 5):
        assert classic_littlestone_dimension(full_class(n)) == n


def test_dimension_monotone_under_restriction():
    rng = np.random.default_rng(5)
    for _ in range(40):
        n = int(rng.integers(2, 5))
        hc = full_class(n)
        sets = [set(np.flatnonzero(rng.integers(0, 2, n))) for _ in range(n)]
        u = PerturbationMap.from_sets(sets)
        v = VersionSpace.full(hc)
        d = dimension_of(v, u)
        for _ in range(3):
            w = restrict(v, int(rng.integers(n)), int(rng.integers(2)), u)
            if w.is_empty:
                break
            d2 = dimension_of(w, u)
            assert d2 <= d
            v, d = w, d2


def test_multiclass_two_labels_agrees_with_binary():
    rng = np.random.default_rng(9)
    for _ in range(30):
        n = int(rng.integers(2, 5))
        count = int(rng.integers(2, 7))
        tables = sorted(
            {tuple(int(v) for v in rng.integers(0, 2, n)) for _ in range(count)}
        )
        hc = HypothesisClass.from_tables(tables)
        sets = [set(np.flatnonzero(rng.integers(0, 2, n))) for _ in range(n)]
        u = PerturbationMap.from_sets(sets)
        assert adversarial_dimension(hc, u, multiclass=True) == (
            adversarial_dimension(hc, u)
        )


def test_depth_cap_reports_lower_bound():
    hc = full_class(3)
    u = identity_map(3)
    capped = adversarial_dimension(hc, u, depth_cap=1)
    assert isinstance(capped, AtLeast)
    assert capped.bound == 1
    assert adversarial_dimension(hc, u, depth_cap=3) == 3
    with pytest.raises(DomainError):
        adversarial_dimension(hc, u, depth_cap=-1)


def test_witness_tree_empty_for_dimension_zero():
    hc = HypothesisClass.from_tables([(0, 0)])
    tree = witness_tree(hc, total_map(2))
    assert tree.root is None
    assert is_shattered(tree, hc, total_map(2))


def test_witness_tree_depth_two_classic():
    hc = full_class(2)
    u = identity_map(2)
    tree = witness_tree(hc, u)
    assert tree.depth == 2
    assert is_shattered(tree, hc, u)


def test_witness_trees_validate_on_random_scenarios():
    rng = np.random.default_rng(17)
    for _ in range(40):
        n = int(rng.integers(2, 5))
        count = int(rng.integers(2, 9))
        tables = sorted(
            {tuple(int(v) for v in rng.integers(0, 2, n)) for _ in range(count)}
        )
        hc = HypothesisClass.from_tables(tables)
        sets = [set(np.flatnonzero(rng.integers(0, 2, n))) for _ in range(n)]
        u = PerturbationMap.from_sets(sets)
        tree = witness_tree(hc, u)
        assert tree.depth == adversarial_dimension(hc, u)
        assert is_shattered(tree, hc, u)


def test_path_realizability():
    hc = full_class(2)
    u = identity_map(2)
    v = VersionSpace.full(hc)
    assert path_realizable([], v, u)
    assert not path_realizable([(0, 0), (0, 1)], v, u)


def test_dimension_bounded_by_log_class_size():
    rng = np.random.default_rng(21)
    for _ in range(30):
        n = int(rng.integers(2, 5))
        count = int(rng.integers(2, 10))
        tables = sorted(
            {tuple(int(v) for v in rng.integers(0, 2, n)) for _ in range(count)}
        )
        hc = HypothesisClass.from_tables(tables)
        sets = [set(np.flatnonzero(rng.integers(0, 2, n))) for _ in range(n)]
        u = PerturbationMap.from_sets(sets)
        assert 2 ** adversarial_dimension(hc, u) <= hc.size
