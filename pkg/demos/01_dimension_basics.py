"""What the adversarial dimension measures, on scenarios small enough to read.

Run:  python3 demos/01_dimension_basics.py
"""

from robust_online import (
    HypothesisClass,
    PerturbationMap,
    adversarial_dimension,
    classic_littlestone_dimension,
    full_class,
    identity_map,
    is_shattered,
    total_map,
    witness_tree,
)


def show(title, hc, u):
    dim = adversarial_dimension(hc, u)
    tree = witness_tree(hc, u)
    assert is_shattered(tree, hc, u)
    print(f"{title}")
    print(f"  hypotheses: {[h.table for h in hc]}")
    print(f"  U: {[sorted(s) for s in u.forward]}")
    print(f"  dimension: {dim}  (witness tree depth {tree.depth})")
    print()


def main():
    # With identity perturbations nothing is adversarial and the value
    # collapses to the classic online dimension.
    hc = full_class(3)
    print(
        "full class on 3 points, identity map:"
        f" dimension {adversarial_dimension(hc, identity_map(3))},"
        f" classic {classic_littlestone_dimension(hc)}"
    )
    print()

    # Letting the adversary substitute any instance makes agreement much
    # harder: only hypotheses constant on the whole space survive a reveal.
    consts = HypothesisClass.from_tables([(0, 0, 0), (1, 1, 1)])
    show("two constant hypotheses, total map", consts, total_map(3))

    # Asymmetric overlap: the dimension sits strictly between the total
    # and identity extremes.
    hc5 = HypothesisClass.from_tables(
        [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 1)]
    )
    u5 = PerturbationMap.from_sets([{0, 1}, {1}, {1, 2}])
    show("five hypotheses, mixed overlap", hc5, u5)
    show("same hypotheses, identity map", hc5, identity_map(3))
    show("same hypotheses, total map", hc5, total_map(3))

    # For this class the value drops as the sets grow, but that is not a
    # law: larger sets tighten the consistency requirement while also
    # enlarging the adversary's node alphabet.
    print("for this class: identity 2, mixed 1, total 1")


if __name__ == "__main__":
    main()
