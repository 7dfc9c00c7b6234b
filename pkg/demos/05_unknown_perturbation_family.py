"""When even the perturbation map is unknown.

The true map is one of a finite family.  Two strategies: aggregate one
expert per member with a small-loss tuned forecaster, or run phased
halving, which eliminates every erring member and restarts when the pool
empties.  The halving demo also shows the one place its per-phase
accounting is loose: the mistake that empties a phase.

Run:  python3 demos/05_unknown_perturbation_family.py
"""

import math

from robust_online import (
    HypothesisClass,
    PerturbationMap,
    PerturbationFamily,
    adversarial_dimension,
    family_halving_run,
    family_loss_budget,
    halving_bound,
    mc_family_mistakes,
)
from robust_online.adversaries import realizable_robust_rounds
from robust_online.seeding import derive_rng
from robust_online.uncertain import family_mistake_bound

HC = HypothesisClass.from_tables(
    [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 1)]
)
FAMILY = PerturbationFamily(
    (
        PerturbationMap.from_sets([{0, 1}, {1}, {1, 2}]),
        PerturbationMap.from_sets([{0}, {1}, {2}]),
        PerturbationMap.from_sets([{0, 1, 2}] * 3),
        PerturbationMap.from_sets([{0}, {0, 1}, {2}]),
    ),
    truth_index=1,
)


def main():
    budget = family_loss_budget(HC, FAMILY)
    bound = family_mistake_bound(len(FAMILY), budget)
    rng = derive_rng(0, "demo-family")
    rounds = realizable_robust_rounds(HC, FAMILY.truth, 12, rng)

    print(f"family of {len(FAMILY)}, per-member loss budget {budget}")
    stats = mc_family_mistakes(HC, FAMILY, rounds, seeds=range(200))
    print(
        f"aggregated learner: mean mistakes {stats['mean']:.2f}"
        f" +- {stats['stderr']:.2f}  vs bound {bound:.2f}"
    )

    report = family_halving_run(HC, FAMILY, rounds)
    print(
        f"phased halving: {report.mistakes} mistakes,"
        f" phases {report.phase_mistakes},"
        f" bound {halving_bound(HC, FAMILY)}"
    )

    # The loose corner: with |G| = 2 a phase can cost two mistakes even
    # though ceil(log2 2) = 1, because the vote tie errs once and the
    # lone survivor may still spend its own allowed mistake.
    u_a = PerturbationMap.from_sets([{0, 1}, set(), {2, 3}, {0, 2}])
    u_b = PerturbationMap.from_sets([set(), {0, 1}, {3}, {0}])
    pair = PerturbationFamily((u_a, u_b), truth_index=1)
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
    dim = adversarial_dimension(hc, pair.truth)
    rng = derive_rng(1, "phase-counterexample")
    rounds = realizable_robust_rounds(hc, pair.truth, 20, rng)
    report = family_halving_run(hc, pair, rounds)
    per_phase_cap = math.ceil(math.log2(len(pair)))
    print(
        f"\ntwo-member corner case: phases {report.phase_mistakes},"
        f" per-phase cap {per_phase_cap},"
        f" total {report.mistakes} <= {(dim + 1) * per_phase_cap}"
    )
    print("the first phase costs 2: the halving mistake plus the emptying one")


if __name__ == "__main__":
    main()
