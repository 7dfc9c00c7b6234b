"""Core model: adversarial loss, version spaces, compatible pairs."""

import numpy as np
import pytest

from robust_online import (
    HypothesisClass,
    PerturbationMap,
    VersionSpace,
    adversarial_loss,
    compatible_pairs,
    full_class,
    identity_map,
    is_realizable_sequence,
    restrict,
    total_map,
)
from robust_online.errors import DomainError
from robust_online.model import empty_map, surviving_mask


def two_point_overlap():
    # X={a,b} with U(a)={a,b}, U(b)={b}
    return PerturbationMap.from_sets([{0, 1}, {1}])


def test_loss_constant_zero_hypothesis_never_pays():
    hc = HypothesisClass.from_tables([(0, 0)])
    u = two_point_overlap()
    for x in range(2):
        assert adversarial_loss(hc[0], x, 0, u) == 0


def test_loss_witness_perturbation_pays():
    hc = HypothesisClass.from_tables([(0, 1)])
    u = two_point_overlap()
    # h(b)=1 and b is an allowed perturbation of a, so (a, y=0) loses
    assert adversarial_loss(hc[0], 0, 0, u) == 1


def test_loss_enumerates_whole_perturbation_set():
    hc = HypothesisClass.from_tables([(0, 1)])
    u = two_point_overlap()
    assert adversarial_loss(hc[0], 0, 0, u) == 1
    assert adversarial_loss(hc[0], 0, 1, u) == 1
    assert adversarial_loss(hc[0], 1, 1, u) == 0


def test_loss_empty_perturbation_set_is_free():
    hc = HypothesisClass.from_tables([(0, 1)])
    u = empty_map(2)
    for x in range(2):
        for y in range(2):
            assert adversarial_loss(hc[0], x, y, u) == 0


def test_restrict_empty_set_keeps_version_space():
    hc = full_class(2)
    u = empty_map(2)
    v = VersionSpace.full(hc)
    assert restrict(v, 0, 1, u).mask == v.mask


def test_restrict_singleton_domain():
    hc = full_class(1)
    u = identity_map(1)
    v = restrict(VersionSpace.full(hc), 0, 1, u)
    assert [h.table for h in v.members()] == [(1,)]


def test_restrict_requires_agreement_on_whole_set():
    # {h1:(0,1), h2:(1,1)} over U(a)={a,b}; reveal (a,1) keeps only h2
    hc = HypothesisClass.from_tables([(0, 1), (1, 1)])
    u = two_point_overlap()
    v = restrict(VersionSpace.full(hc), 0, 1, u)
    assert [h.table for h in v.members()] == [(1, 1)]


def test_restrict_is_monotone_and_idempotent():
    rng = np.random.default_rng(7)
    for _ in range(60):
        n = int(rng.integers(2, 5))
        hc = full_class(n)
        sets = [set(np.flatnonzero(rng.integers(0, 2, n))) for _ in range(n)]
        u = PerturbationMap.from_sets(sets)
        v = VersionSpace.full(hc)
        for _ in range(4):
            x = int(rng.integers(n))
            y = int(rng.integers(2))
            w = restrict(v, x, y, u)
            assert w.mask & ~v.mask == 0
            assert restrict(w, x, y, u).mask == w.mask
            v = w


def test_compatible_pairs_fixed_case():
    u = two_point_overlap()
    assert compatible_pairs(u) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_compatible_pairs_empty_map_has_none():
    assert compatible_pairs(empty_map(3)) == set()


def test_compatible_pairs_symmetric_and_reflexive_on_nonempty():
    rng = np.random.default_rng(11)
    for _ in range(40):
        n = int(rng.integers(2, 6))
        sets = [set(np.flatnonzero(rng.integers(0, 2, n))) for _ in range(n)]
        u = PerturbationMap.from_sets(sets)
        pairs = compatible_pairs(u)
        for a, b in pairs:
            assert (b, a) in pairs
        for x in range(n):
            if sets[x]:
                assert (x, x) in pairs


def test_realizable_empty_sequence():
    assert is_realizable_sequence([], full_class(2), total_map(2))


def test_realizable_contradictory_labels_fail_everywhere():
    u = identity_map(2)
    seq = [(0, 0), (0, 1)]
    for tables in ([(0, 0)], [(0, 1), (1, 0)], None):
        hc = full_class(2) if tables is None else HypothesisClass.from_tables(tables)
        assert not is_realizable_sequence(seq, hc, u)


def test_realizable_constant_class():
    hc = HypothesisClass.from_tables([(0, 0)])
    assert is_realizable_sequence([(1, 0)], hc, total_map(2))


def test_surviving_mask_matches_restrict_chain():
    rng = np.random.default_rng(23)
    for _ in range(30):
        n = int(rng.integers(2, 5))
        hc = full_class(n)
        sets = [set(np.flatnonzero(rng.integers(0, 2, n))) for _ in range(n)]
        u = PerturbationMap.from_sets(sets)
        seq = [(int(rng.integers(n)), int(rng.integers(2))) for _ in range(5)]
        v = VersionSpace.full(hc)
        for x, y in seq:
            v = restrict(v, x, y, u)
        assert surviving_mask(seq, hc, u) == v.mask


def test_perturbation_map_rejects_out_of_range_targets():
    with pytest.raises(DomainError):
        PerturbationMap.from_sets([{0, 5}, {1}])


def test_full_class_size():
    assert full_class(3).size == 8
    assert full_class(2, label_count=3).size == 9


def test_total_and_identity_maps():
    assert total_map(3).forward[0] == frozenset({0, 1, 2})
    assert identity_map(3).forward[2] == frozenset({2})
