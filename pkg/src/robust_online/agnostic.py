"""Agnostic robust learning by aggregating subset-trained experts.

Regret is measured against the best single hypothesis under the
adversarial loss.  One expert is built per round subset of size at most
the class dimension; expert A_J runs the lazy optimal learner and shows it
only the rounds in J.  For the subset picked by the analysis (the mistake
rounds of the lazy learner on the clean part of the sequence) the expert's
total mistakes are at most dimension + comparator loss, so exponentially
weighted aggregation turns the pool into a sublinear-regret learner.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .adversaries import ScriptedRobustAdversary
from .dimension import adversarial_dimension, get_engine, witness_tree
from .errors import DomainError, LimitExceeded
from .forecaster import (
    ExponentialWeightsForecaster,
    horizon_rate,
    weight_trajectory,
)
from .learners import LazyRobustLearner, RobustReductionLearner, lazy_wrap
from .model import HypothesisClass, PerturbationMap, adversarial_loss
from .seeding import derive_rng

MAX_EXPERTS = 20000


def hypothesis_losses(hc: HypothesisClass, u: PerturbationMap, rounds) -> list[int]:
    """Total adversarial loss of each hypothesis on the clean pairs."""
    totals = [0] * hc.size
    for _, x, y in rounds:
        for h in hc:
            totals[h.id] += adversarial_loss(h, x, y, u)
    return totals


def comparator_loss(hc: HypothesisClass, u: PerturbationMap, rounds) -> tuple[int, int]:
    """(best total adversarial loss, smallest hypothesis id achieving it)."""
    totals = hypothesis_losses(hc, u, rounds)
    best = min(totals)
    return best, totals.index(best)


class SubsetExpert:
    """The lazy optimal learner, shown only the rounds in one subset."""

    def __init__(self, indices, hc: HypothesisClass, u: PerturbationMap):
        self.indices = frozenset(indices)
        self.learner = LazyRobustLearner(
            RobustReductionLearner(hc, u, strict=False, empty_prediction=0)
        )

    def predict(self, z: int) -> int:
        return self.learner.predict(z)

    def observe(self, t: int, z: int, x: int, y: int) -> None:
        if t in self.indices:
            self.learner.update(z, x, y)


def subset_expert_count(horizon: int, dimension: int) -> int:
    return sum(math.comb(horizon, k) for k in range(min(dimension, horizon) + 1))


def build_subset_experts(
    hc: HypothesisClass,
    u: PerturbationMap,
    horizon: int,
    dimension: int | None = None,
) -> list[SubsetExpert]:
    """One expert per round subset of size at most the class dimension.

    Deterministic order: subsets by size, then lexicographically.  Raises
    when the pool would exceed the desk-scale cap, stating the needed count.
    """
    if dimension is None:
        dimension = adversarial_dimension(hc, u)
    need = subset_expert_count(horizon, dimension)
    if need > MAX_EXPERTS:
        raise LimitExceeded(
            f"subset pool needs {need} experts for horizon {horizon} and "
            f"dimension {dimension}; the cap is {MAX_EXPERTS}"
        )
    experts = []
    for k in range(min(dimension, horizon) + 1):
        for combo in itertools.combinations(range(horizon), k):
            experts.append(SubsetExpert(combo, hc, u))
    return experts


@dataclass
class RegretReport:
    mistakes: int
    comparator: int
    regret: int
    best_hypothesis: int
    seed: int
    probabilities: list[float] = field(default_factory=list)
    expert_count: int = 0


def expert_matrices(hc, u, rounds, experts):
    """(predictions, losses) as (n_experts, horizon) 0/1 arrays.

    Experts adapt to the fixed sequence only, never to the forecaster's
    coin flips, so one pass serves every seed.
    """
    n, horizon = len(experts), len(rounds)
    preds = np.zeros((n, horizon), dtype=np.int8)
    for t, (z, x, y) in enumerate(rounds):
        for i, e in enumerate(experts):
            preds[i, t] = e.predict(z)
        for e in experts:
            e.observe(t, z, x, y)
    labels = np.array([y for _, _, y in rounds], dtype=np.int8)
    losses = (preds != labels[None, :]).astype(np.int8)
    return preds, losses


def agnostic_run(
    hc: HypothesisClass,
    u: PerturbationMap,
    rounds,
    seed: int,
    dimension: int | None = None,
    rate: float | None = None,
) -> RegretReport:
    """One seeded pass of the aggregated learner over a fixed sequence."""
    rounds = list(rounds)
    if not rounds:
        raise DomainError("need at least one round")
    experts = build_subset_experts(hc, u, len(rounds), dimension)
    if rate is None:
        rate = horizon_rate(len(experts), len(rounds))
    fore = ExponentialWeightsForecaster(len(experts), rate)
    rng = derive_rng(seed, "agnostic")
    mistakes = 0
    probs = []
    for t, (z, x, y) in enumerate(rounds):
        preds = [e.predict(z) for e in experts]
        p = fore.probability(preds)
        probs.append(p)
        guess = int(rng.random() < p)
        mistakes += int(guess != y)
        fore.update([int(pr != y) for pr in preds])
        for e in experts:
            e.observe(t, z, x, y)
    best, best_id = comparator_loss(hc, u, rounds)
    return RegretReport(
        mistakes=mistakes,
        comparator=best,
        regret=mistakes - best,
        best_hypothesis=best_id,
        seed=seed,
        probabilities=probs,
        expert_count=len(experts),
    )


def mc_regret(
    hc: HypothesisClass,
    u: PerturbationMap,
    rounds,
    seeds,
    dimension: int | None = None,
    rate: float | None = None,
) -> dict:
    """Monte-Carlo regret statistics over forecaster seeds, vectorized."""
    rounds = list(rounds)
    experts = build_subset_experts(hc, u, len(rounds), dimension)
    if rate is None:
        rate = horizon_rate(len(experts), len(rounds))
    preds, losses = expert_matrices(hc, u, rounds, experts)
    probs = weight_trajectory(preds, losses, rate)
    labels = np.array([y for _, _, y in rounds])
    best, _ = comparator_loss(hc, u, rounds)
    regrets = []
    for seed in seeds:
        rng = derive_rng(seed, "agnostic")
        guesses = (rng.random(len(rounds)) < probs).astype(int)
        regrets.append(int((guesses != labels).sum()) - best)
    regrets = np.array(regrets, dtype=float)
    return {
        "mean": float(regrets.mean()),
        "std": float(regrets.std(ddof=1)) if len(regrets) > 1 else 0.0,
        "stderr": float(regrets.std(ddof=1) / math.sqrt(len(regrets)))
        if len(regrets) > 1
        else 0.0,
        "comparator": best,
        "expert_count": len(experts),
        "values": regrets.tolist(),
    }


def analysis_subset(hc: HypothesisClass, u: PerturbationMap, rounds) -> tuple:
    """The subset the decomposition argument picks for a given sequence.

    Takes the comparator hypothesis, keeps the rounds it labels for free,
    replays the lazy optimal learner on that clean subsequence, and
    returns (mistake round indices, comparator loss, comparator id).
    """
    best, best_id = comparator_loss(hc, u, rounds)
    h = hc[best_id]
    clean = [
        (t, r) for t, r in enumerate(rounds) if adversarial_loss(h, r[1], r[2], u) == 0
    ]
    lazy = lazy_wrap(RobustReductionLearner(hc, u, strict=False, empty_prediction=0))
    picked = []
    for t, (z, x, y) in clean:
        if lazy.predict(z) != y:
            picked.append(t)
        lazy.update(z, x, y)
    return tuple(picked), best, best_id


def decomposition_gap(hc: HypothesisClass, u: PerturbationMap, rounds) -> dict:
    """Replay the analysis expert on the full sequence and report its slack.

    The expert's total mistakes must never exceed dimension + comparator
    loss; the returned gap is bound minus realized mistakes (>= 0).
    """
    picked, best, best_id = analysis_subset(hc, u, rounds)
    expert = SubsetExpert(picked, hc, u)
    mistakes = 0
    for t, (z, x, y) in enumerate(rounds):
        mistakes += int(expert.predict(z) != y)
        expert.observe(t, z, x, y)
    dim = adversarial_dimension(hc, u)
    return {
        "expert_mistakes": mistakes,
        "bound": dim + best,
        "gap": dim + best - mistakes,
        "dimension": dim,
        "comparator": best,
        "subset": picked,
        "best_hypothesis": best_id,
    }


def random_label_regret_sample(
    hc: HypothesisClass,
    u: PerturbationMap,
    horizon: int,
    seed: int,
    learner_factory=None,
) -> dict:
    """Realized regret of a learner on one dimension-witnessing node
    replayed with uniformly random labels.

    The node is the root of the maximum shattered tree; the class must
    have dimension at least 1.  The default learner is the lazy optimal
    learner run tolerantly, but any robust-game learner factory works.
    """
    tree = witness_tree(hc, u)
    if tree.depth < 1 or tree.root is None:
        raise DomainError("need dimension >= 1 to build the probe node")
    x0, x1 = tree.root.pair
    z = min(u.forward[x0] & u.forward[x1])
    rng = derive_rng(seed, "random-label-probe")
    labels = rng.integers(0, 2, size=horizon)
    if learner_factory is None:
        learner = lazy_wrap(
            RobustReductionLearner(hc, u, strict=False, empty_prediction=0)
        )
    else:
        learner = learner_factory(hc, u)
    mistakes = 0
    for y in labels:
        y = int(y)
        pred = learner.predict(z)
        mistakes += int(pred != y)
        learner.update(z, (x0, x1)[y], y)
    n1 = int(labels.sum())
    n0 = horizon - n1
    side_costs = [
        n0 * adversarial_loss(h, x0, 0, u) + n1 * adversarial_loss(h, x1, 1, u)
        for h in hc
    ]
    comparator = min(side_costs)
    return {
        "regret": mistakes - comparator,
        "mistakes": mistakes,
        "comparator": comparator,
        "node": (x0, x1),
        "perturbed_input": z,
    }
