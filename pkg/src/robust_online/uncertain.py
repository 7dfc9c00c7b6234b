"""Learning when the perturbation map is only known to lie in a finite family.

Two learners, both driving one expert per family member, where an expert
runs the robust reduction learner under the assumption that its member is
the true map:

* aggregation by exponentially weighted forecaster in the known-loss-budget
  regime, with budget max over members of the adversarial dimension;
* deterministic phased halving: majority vote of the alive experts, erring
  experts removed every round, all experts revived when none are left.

Experts run tolerantly.  Under a wrong assumed map the shown input can sit
outside the assumed perturbation set of the revealed instance, reveals can
empty the version space, and mistake rounds can lack an oriented
counterpart; a wrong-map expert just keeps predicting (1 once its version
space is empty) and accumulates events.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dimension import adversarial_dimension
from .errors import DomainError
from .forecaster import (
    ExponentialWeightsForecaster,
    loss_budget_rate,
    small_loss_bound,
    weight_trajectory,
)
from .learners import RobustReductionLearner
from .model import HypothesisClass, PerturbationMap, surviving_mask
from .seeding import derive_rng


@dataclass(frozen=True)
class PerturbationFamily:
    """Finite candidate set of perturbation maps with a hidden true member.

    truth_index is harness bookkeeping for generating sequences and
    computing reference bounds; the learners in this module never read it.
    """

    members: tuple[PerturbationMap, ...]
    truth_index: int = 0

    def __post_init__(self):
        if not self.members:
            raise DomainError("a perturbation family needs at least one member")
        widths = {len(u.forward) for u in self.members}
        if len(widths) != 1:
            raise DomainError(f"family members disagree on instance count: {widths}")
        if not 0 <= self.truth_index < len(self.members):
            raise DomainError(
                f"truth_index {self.truth_index} out of range for "
                f"{len(self.members)} members"
            )

    @property
    def truth(self) -> PerturbationMap:
        return self.members[self.truth_index]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> PerturbationMap:
        return self.members[i]


def build_family_experts(
    hc: HypothesisClass, members
) -> list[RobustReductionLearner]:
    """One tolerant robust learner per candidate map, in member order."""
    return [
        RobustReductionLearner(hc, u, strict=False, empty_prediction=1)
        for u in members
    ]


def family_loss_budget(hc: HypothesisClass, family: PerturbationFamily) -> int:
    """Largest adversarial dimension across the family.

    Whichever member is true, its expert loses at most this much on a
    realizable sequence, so the budget is safe to hand the forecaster.
    """
    return max(adversarial_dimension(hc, u) for u in family.members)


def family_mistake_bound(n_members: int, budget: int) -> float:
    """Expected-mistake guarantee for the aggregated learner."""
    return small_loss_bound(n_members, budget)


def sequence_realizable(hc: HypothesisClass, members, rounds) -> bool:
    """True when some member explains the whole sequence.

    A member explains it when every shown input lies in its perturbation
    set of the revealed instance and some hypothesis has zero adversarial
    loss on every revealed pair.
    """
    rounds = list(rounds)
    pairs = [(x, y) for _, x, y in rounds]
    for u in members:
        if all(z in u.forward[x] for z, x, _ in rounds) and surviving_mask(
            pairs, hc, u
        ):
            return True
    return False


@dataclass
class FamilyRunReport:
    mistakes: int
    seed: int
    budget: int
    rate: float
    realizable: bool
    expert_mistakes: list[int] = field(default_factory=list)


def family_ewa_run(
    hc: HypothesisClass,
    family: PerturbationFamily,
    rounds,
    seed: int,
    budget: int | None = None,
    rate: float | None = None,
) -> FamilyRunReport:
    """One seeded pass of the aggregated family learner."""
    rounds = list(rounds)
    if not rounds:
        raise DomainError("need at least one round")
    experts = build_family_experts(hc, family.members)
    if budget is None:
        budget = family_loss_budget(hc, family)
    if rate is None:
        rate = loss_budget_rate(len(experts), budget)
    fore = ExponentialWeightsForecaster(len(experts), rate)
    rng = derive_rng(seed, "family-ewa")
    mistakes = 0
    expert_mistakes = [0] * len(experts)
    for z, x, y in rounds:
        preds = [e.predict(z) for e in experts]
        guess = int(rng.random() < fore.probability(preds))
        mistakes += int(guess != y)
        losses = [int(p != y) for p in preds]
        for i, l in enumerate(losses):
            expert_mistakes[i] += l
        fore.update(losses)
        for e in experts:
            e.update(z, x, y)
    return FamilyRunReport(
        mistakes=mistakes,
        seed=seed,
        budget=budget,
        rate=rate,
        realizable=sequence_realizable(hc, family.members, rounds),
        expert_mistakes=expert_mistakes,
    )


def family_expert_matrices(hc: HypothesisClass, members, rounds):
    """(predictions, losses) 0/1 arrays of shape (n_members, horizon).

    Experts adapt to the fixed sequence only, so one deterministic pass
    serves every forecaster seed.
    """
    rounds = list(rounds)
    experts = build_family_experts(hc, members)
    preds = np.zeros((len(experts), len(rounds)), dtype=np.int8)
    for t, (z, x, y) in enumerate(rounds):
        for i, e in enumerate(experts):
            preds[i, t] = e.predict(z)
        for e in experts:
            e.update(z, x, y)
    labels = np.array([y for _, _, y in rounds], dtype=np.int8)
    losses = (preds != labels[None, :]).astype(np.int8)
    return preds, losses


def mc_family_mistakes(
    hc: HypothesisClass,
    family: PerturbationFamily,
    rounds,
    seeds,
    budget: int | None = None,
    rate: float | None = None,
) -> dict:
    """Monte-Carlo mistake statistics over forecaster seeds, vectorized."""
    rounds = list(rounds)
    if budget is None:
        budget = family_loss_budget(hc, family)
    if rate is None:
        rate = loss_budget_rate(len(family), budget)
    preds, losses = family_expert_matrices(hc, family.members, rounds)
    probs = weight_trajectory(preds, losses, rate)
    labels = np.array([y for _, _, y in rounds])
    counts = []
    for seed in seeds:
        rng = derive_rng(seed, "family-ewa")
        guesses = (rng.random(len(rounds)) < probs).astype(int)
        counts.append(int((guesses != labels).sum()))
    counts = np.array(counts, dtype=float)
    return {
        "mean": float(counts.mean()),
        "std": float(counts.std(ddof=1)) if len(counts) > 1 else 0.0,
        "stderr": float(counts.std(ddof=1) / math.sqrt(len(counts)))
        if len(counts) > 1
        else 0.0,
        "budget": budget,
        "bound": family_mistake_bound(len(family), budget),
        "best_expert": int(losses.sum(axis=1).min()),
        "realizable": sequence_realizable(hc, family.members, rounds),
        "values": counts.tolist(),
    }


@dataclass
class HalvingReport:
    mistakes: int
    phase_mistakes: list[int]
    completed_phases: int
    expert_mistakes: list[int]
    alive_count: int

    @property
    def max_phase_mistakes(self) -> int:
        return max(self.phase_mistakes) if self.phase_mistakes else 0


def halving_bound(hc: HypothesisClass, family: PerturbationFamily) -> int:
    """Reference mistake bound for the phased halving learner.

    Degenerate single-member families fall back to the lone expert's own
    bound, the adversarial dimension; larger families get
    (dimension + 1) * ceil(log2(size)).
    """
    dim = adversarial_dimension(hc, family.truth)
    if len(family) == 1:
        return dim
    return (dim + 1) * math.ceil(math.log2(len(family)))


def family_halving_run(
    hc: HypothesisClass,
    family: PerturbationFamily,
    rounds,
    reset_experts: bool = False,
) -> HalvingReport:
    """Deterministic phased halving over the family experts.

    Each round the majority label of the alive experts is predicted (ties
    go to 1), then every expert that mispredicted is dropped from the
    alive set; when it empties, the next round starts a fresh phase with
    all members alive.  Experts keep their internal state across phases by
    default, observing every reveal even while dead; reset_experts=True
    rebuilds them from scratch at each phase start instead, and then only
    alive experts observe reveals.
    """
    members = family.members
    n = len(members)
    experts = build_family_experts(hc, members)
    alive = set(range(n))
    mistakes = 0
    phase_mistakes = [0]
    expert_mistakes = [0] * n
    for z, x, y in rounds:
        preds = {
            i: experts[i].predict(z)
            for i in (alive if reset_experts else range(n))
        }
        ones = sum(preds[i] for i in alive)
        guess = int(ones >= len(alive) - ones)
        if guess != y:
            mistakes += 1
            phase_mistakes[-1] += 1
        for i, p in preds.items():
            expert_mistakes[i] += int(p != y)
        alive = {i for i in alive if preds[i] == y}
        if reset_experts:
            for i in preds:
                experts[i].update(z, x, y)
        else:
            for e in experts:
                e.update(z, x, y)
        if not alive:
            alive = set(range(n))
            phase_mistakes.append(0)
            if reset_experts:
                experts = build_family_experts(hc, members)
    return HalvingReport(
        mistakes=mistakes,
        phase_mistakes=phase_mistakes,
        completed_phases=len(phase_mistakes) - 1,
        expert_mistakes=expert_mistakes,
        alive_count=len(alive),
    )
