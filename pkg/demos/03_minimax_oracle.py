"""The exhaustive game solver agrees with the combinatorial dimension.

The solver searches the entire game tree: the adversary ranges over every
reveal that keeps the sequence realizable, the learner over every label.
Small scenarios only, but the agreement is exact, which is what makes it
a useful oracle for the rest of the package.

Run:  python3 demos/03_minimax_oracle.py
"""

from robust_online import (
    CorpusParams,
    adversarial_dimension,
    generate_corpus,
    optimal_mistake_bound,
)


def main():
    scenarios = generate_corpus(CorpusParams(count=16, seed=42))
    print(f"{'scenario':<14} {'dim':>3} {'robust':>7} {'orientation':>12}")
    disagreements = 0
    for i, sc in enumerate(scenarios):
        hc, u = sc.hypotheses, sc.truth
        dim = adversarial_dimension(hc, u)
        robust = optimal_mistake_bound(hc, u, game="robust")
        orient = optimal_mistake_bound(hc, u, game="orientation")
        mark = "" if robust == orient == dim else "  <- disagreement"
        disagreements += robust != dim or orient != dim
        print(f"scenario_{i:04d}  {dim:>3} {robust:>7} {orient:>12}{mark}")
    print(f"\ndisagreements: {disagreements} of {len(scenarios)}")

    # horizon-capped values grow one mistake per round until they saturate
    sc = scenarios[0]
    hc, u = sc.hypotheses, sc.truth
    dim = adversarial_dimension(hc, u)
    capped = [optimal_mistake_bound(hc, u, horizon=t) for t in range(dim + 2)]
    print(f"horizon-capped values for scenario_0000: {capped} (cap {dim})")


if __name__ == "__main__":
    main()
