"""Beyond realizability: aggregated subset experts and their regret.

A corrupted sequence has no perfect hypothesis, so the yardstick becomes
the best hypothesis in hindsight.  One expert per small round subset plus
an exponentially weighted vote keeps the mean regret near
dimension + sqrt((T/2) ln N).

Run:  python3 demos/04_agnostic_regret.py
"""

import math

from robust_online import (
    HypothesisClass,
    PerturbationMap,
    adversarial_dimension,
    comparator_loss,
    decomposition_gap,
    mc_regret,
    subset_expert_count,
)
from robust_online.adversaries import corrupt_labels, realizable_robust_rounds
from robust_online.seeding import derive_rng

HC = HypothesisClass.from_tables(
    [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 1)]
)
U = PerturbationMap.from_sets([{0, 1}, {1}, {1, 2}])


def main():
    horizon, corruptions = 12, 2
    dim = adversarial_dimension(HC, U)
    rng = derive_rng(7, "demo-agnostic")
    rounds = corrupt_labels(
        realizable_robust_rounds(HC, U, horizon, rng), corruptions, 2, rng
    )

    best, best_id = comparator_loss(HC, U, rounds)
    print(f"dimension {dim}, horizon {horizon}, corrupted rounds {corruptions}")
    print(f"comparator: hypothesis {best_id} with loss {best}")

    report = decomposition_gap(HC, U, rounds)
    print(
        "decomposition expert: "
        f"{report['expert_mistakes']} mistakes <= {report['dimension']}"
        f" + {report['comparator']} (gap {report['gap']})"
    )

    n_experts = subset_expert_count(horizon, dim)
    bound = dim + math.sqrt(horizon / 2 * math.log(n_experts))
    stats = mc_regret(HC, U, rounds, seeds=range(300))
    print(f"\n{n_experts} subset experts, 300 forecaster seeds")
    print(
        f"mean regret {stats['mean']:.2f} +- {stats['stderr']:.2f}"
        f"  vs bound {bound:.2f}"
    )


if __name__ == "__main__":
    main()
