"""Unknown perturbation map: expert aggregation and phased halving."""

import math

import numpy as np
import pytest

from robust_online import (
    HypothesisClass,
    PerturbationMap,
    PerturbationFamily,
    adversarial_dimension,
    build_family_experts,
    family_ewa_run,
    family_halving_run,
    family_loss_budget,
    full_class,
    halving_bound,
    identity_map,
    mc_family_mistakes,
    total_map,
)
from robust_online.adversaries import realizable_robust_rounds
from robust_online.errors import DomainError
from robust_online.seeding import derive_rng
from robust_online.uncertain import (
    family_mistake_bound,
    sequence_realizable,
)

HC5 = HypothesisClass.from_tables(
    [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 1)]
)
U5 = PerturbationMap.from_sets([{0, 1}, {1}, {1, 2}])


def small_family(truth_index=0):
    members = [
        U5,
        identity_map(3),
        total_map(3),
        PerturbationMap.from_sets([{0}, {0, 1}, {2}]),
    ]
    return PerturbationFamily(tuple(members), truth_index=truth_index)


def realizable_under_truth(family, horizon, seed):
    rng = derive_rng(seed, "uncertain-rounds")
    return realizable_robust_rounds(HC5, family.truth, horizon, rng)


def test_family_validation():
    with pytest.raises(DomainError):
        PerturbationFamily((), truth_index=0)
    with pytest.raises(DomainError):
        PerturbationFamily((U5,), truth_index=3)
    fam = small_family(truth_index=2)
    assert len(fam) == 4
    assert fam.truth is fam[2]


def test_family_loss_budget_is_worst_member_dimension():
    fam = small_family()
    dims = [adversarial_dimension(HC5, u) for u in fam]
    assert family_loss_budget(HC5, fam) == max(dims)


def test_family_mistake_bound_formula():
    budget = 3
    n = 4
    expected = budget + math.sqrt(2 * budget * math.log(n)) + math.log(n)
    assert family_mistake_bound(n, budget) == pytest.approx(expected)


def test_family_experts_tolerate_foreign_inputs():
    fam = small_family(truth_index=1)
    experts = build_family_experts(HC5, fam)
    assert len(experts) == len(fam)
    rounds = realizable_under_truth(fam, 8, seed=0)
    for expert in experts:
        for z, x, y in rounds:
            pred = expert.predict(z)
            assert pred in (0, 1)
            expert.update(z, x, y)


def test_true_expert_keeps_its_realizable_bound():
    for truth_index in range(4):
        fam = small_family(truth_index=truth_index)
        dim = adversarial_dimension(HC5, fam.truth)
        experts = build_family_experts(HC5, fam)
        expert = experts[truth_index]
        mistakes = 0
        for z, x, y in realizable_under_truth(fam, 10, seed=1):
            mistakes += int(expert.predict(z) != y)
            expert.update(z, x, y)
        assert mistakes <= dim


def test_sequence_realizable_detects_the_truth():
    fam = small_family(truth_index=1)
    rounds = realizable_under_truth(fam, 8, seed=2)
    assert sequence_realizable(HC5, list(fam), rounds)
    # impossible composite round: no member admits it with a survivor
    broken = [(0, 0, 0), (0, 0, 1)]
    assert not sequence_realizable(
        HypothesisClass.from_tables([(0, 0, 0)]), [identity_map(3)], broken
    )


def test_family_ewa_run_reports_budget_and_expert_losses():
    fam = small_family(truth_index=0)
    rounds = realizable_under_truth(fam, 12, seed=3)
    report = family_ewa_run(HC5, fam, rounds, seed=0)
    assert report.budget == family_loss_budget(HC5, fam)
    assert report.realizable
    assert 0 <= report.mistakes <= len(rounds)
    # the true member's expert stays within its own realizable bound
    true_dim = adversarial_dimension(HC5, fam.truth)
    assert report.expert_mistakes[0] <= true_dim
    assert min(report.expert_mistakes) <= report.budget


def test_mc_family_mistakes_meets_bound_every_truth():
    for truth_index in range(4):
        fam = small_family(truth_index=truth_index)
        rounds = realizable_under_truth(fam, 12, seed=4)
        stats = mc_family_mistakes(HC5, fam, rounds, seeds=range(80))
        assert stats["mean"] <= stats["bound"] + 3 * stats["stderr"]
        assert stats["best_expert"] <= stats["budget"]
        assert stats["realizable"]


def test_halving_bound_values():
    # the reference bound uses the true member's dimension
    for truth_index in range(4):
        fam = small_family(truth_index=truth_index)
        dim = adversarial_dimension(HC5, fam.truth)
        assert halving_bound(HC5, fam) == (dim + 1) * math.ceil(math.log2(4))
    lone = PerturbationFamily((U5,), truth_index=0)
    assert halving_bound(HC5, lone) == adversarial_dimension(HC5, U5)


def test_halving_total_mistakes_within_bound():
    for truth_index in range(4):
        fam = small_family(truth_index=truth_index)
        rounds = realizable_under_truth(fam, 16, seed=5)
        report = family_halving_run(HC5, fam, rounds)
        assert report.mistakes <= halving_bound(HC5, fam)
        assert report.mistakes == sum(report.phase_mistakes)
        assert report.alive_count >= 1


def test_halving_single_member_family_is_the_plain_learner():
    fam = PerturbationFamily((U5,), truth_index=0)
    dim = adversarial_dimension(HC5, U5)
    rounds = realizable_under_truth(fam, 12, seed=6)
    report = family_halving_run(HC5, fam, rounds)
    assert report.mistakes <= dim
    assert report.completed_phases == 0


def test_halving_reset_variant_keeps_phase_structure_only():
    # rebuilding experts each phase forfeits the carry-state total bound:
    # a sequence can re-exploit the reborn experts phase after phase, so
    # only the per-phase shape survives
    for truth_index in range(4):
        fam = small_family(truth_index=truth_index)
        rounds = realizable_under_truth(fam, 16, seed=7)
        report = family_halving_run(HC5, fam, rounds, reset_experts=True)
        cap = math.floor(math.log2(len(fam))) + 1
        assert report.max_phase_mistakes <= cap
        completed = report.phase_mistakes[: report.completed_phases]
        assert all(m >= 1 for m in completed)
        assert report.alive_count >= 1


def test_halving_phase_cost_can_exceed_the_log_by_one():
    """Pinned counterexample: a completed phase can cost floor(log2 |G|) + 1.

    With two members, the majority vote over a split pair ties toward 1
    and errs, halving the alive set; the lone survivor may then spend its
    own allowed mistake, emptying the set.  That closes the phase at two
    mistakes even though log2(2) = 1.  The total stays within
    (dimension + 1) * ceil(log2 |G|); only the per-phase count overshoots.
    """
    u_a = PerturbationMap.from_sets([{0, 1}, set(), {2, 3}, {0, 2}])
    u_b = PerturbationMap.from_sets([set(), {0, 1}, {3}, {0}])
    fam = PerturbationFamily((u_a, u_b), truth_index=1)
    hc = HypothesisClass.from_tables(
        [
            (0, 0, 1, 0),
            (0, 0, 1, 1),
            (0, 1, 1, 1),
            (1, 0, 1, 1),
            (1, 1, 0, 0),
            (1, 1, 1, 1),
        ]
    )
    dim = adversarial_dimension(hc, fam.truth)
    assert dim == 2
    rng = derive_rng(1, "phase-counterexample")
    rounds = realizable_robust_rounds(hc, fam.truth, 20, rng)
    report = family_halving_run(hc, fam, rounds)
    assert report.mistakes <= (dim + 1) * math.ceil(math.log2(len(fam)))
    assert report.max_phase_mistakes == 2
    assert report.phase_mistakes[0] == 2


def test_halving_report_counts_expert_mistakes():
    fam = small_family(truth_index=2)
    rounds = realizable_under_truth(fam, 12, seed=8)
    report = family_halving_run(HC5, fam, rounds)
    assert len(report.expert_mistakes) == len(fam)
    dim = adversarial_dimension(HC5, fam.truth)
    assert report.expert_mistakes[2] <= dim
