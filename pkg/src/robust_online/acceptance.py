"""Acceptance suite: the checks the package promises to satisfy.

Each criterion is a pure function of a scale configuration and a seed, so
two runs with the same arguments print byte-identical result lines.  The
"full" scale is authoritative; "smoke" exists for quick iteration and for
the reproducibility criterion, which compares two subprocess runs.

Wall-clock never appears in result lines.  Where a criterion carries a
runtime budget, the elapsed time feeds the verdict but not the text.
"""

import math
import subprocess
import sys
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .adversaries import (
    OrientationTreeAdversary,
    RobustTreeAdversary,
    ScriptedOrientationAdversary,
    ScriptedRobustAdversary,
    corrupt_labels,
    realizable_orientation_rounds,
    realizable_robust_rounds,
    robust_anchors,
)
from .agnostic import decomposition_gap, mc_regret, random_label_regret_sample
from .dimension import (
    adversarial_dimension,
    classic_littlestone_dimension,
    get_engine,
    witness_tree,
)
from .errors import ProtocolViolation, SearchInvariantError
from .forecaster import horizon_regret_bound, horizon_rate
from .learners import (
    BASELINES,
    RobustReductionLearner,
    SoaOrientationLearner,
    make_learner,
)
from .model import full_class, total_map
from .oracle import optimal_mistake_bound
from .runner import run_orientation_game, run_robust_game
from .scenario import CorpusParams, generate_corpus, generate_family_scenarios
from .seeding import derive_rng
from .uncertain import family_halving_run, mc_family_mistakes


@dataclass(frozen=True)
class Scale:
    name: str
    corpus_count: int
    classic_count: int
    conform_binary: int
    conform_multiclass: int
    conform_sequences: int
    conform_horizon: int
    tree_scenarios: int
    decomp_scenarios: int
    ewa_sizes: tuple[int, ...]
    ewa_horizons: tuple[int, ...]
    ewa_seeds: int
    agnostic_scenarios: int
    agnostic_horizon: int
    agnostic_seeds: int
    halving_scenarios: int
    halving_horizon: int
    family_scenarios: int
    family_seeds: int
    family_horizon: int
    trend_horizons: tuple[int, ...]
    trend_seeds: int


FULL = Scale(
    name="full",
    corpus_count=200,
    classic_count=100,
    conform_binary=24,
    conform_multiclass=8,
    conform_sequences=1000,
    conform_horizon=10,
    tree_scenarios=120,
    decomp_scenarios=50,
    ewa_sizes=(4, 8, 16),
    ewa_horizons=(256, 1024),
    ewa_seeds=100,
    agnostic_scenarios=10,
    agnostic_horizon=12,
    agnostic_seeds=200,
    halving_scenarios=102,
    halving_horizon=20,
    family_scenarios=9,
    family_seeds=100,
    family_horizon=12,
    trend_horizons=(64, 256, 1024),
    trend_seeds=2000,
)

SMOKE = Scale(
    name="smoke",
    corpus_count=24,
    classic_count=12,
    conform_binary=4,
    conform_multiclass=2,
    conform_sequences=40,
    conform_horizon=8,
    tree_scenarios=12,
    decomp_scenarios=10,
    ewa_sizes=(4, 8),
    ewa_horizons=(64, 256),
    ewa_seeds=20,
    agnostic_scenarios=3,
    agnostic_horizon=10,
    agnostic_seeds=50,
    halving_scenarios=12,
    halving_horizon=12,
    family_scenarios=3,
    family_seeds=30,
    family_horizon=10,
    trend_horizons=(64, 256, 1024),
    trend_seeds=600,
)

SCALES = {"full": FULL, "smoke": SMOKE}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d}: {verdict}  {self.name} ({self.detail})"


def _sub_seed(seed: int, criterion: int) -> int:
    return seed * 1000 + criterion


def _robust_usable(hc, u) -> bool:
    return any(robust_anchors(hc, u, h) for h in hc)


def criterion_1(scale: Scale, seed: int) -> CriterionResult:
    """Dimension equals the exact minimax value of both games."""
    corpus = generate_corpus(
        CorpusParams(count=scale.corpus_count, seed=_sub_seed(seed, 1))
    )
    start = time.monotonic()
    mismatches = 0
    for sc in corpus:
        hc, u = sc.hypotheses, sc.truth
        dim = adversarial_dimension(hc, u)
        robust = optimal_mistake_bound(hc, u, game="robust")
        orient = optimal_mistake_bound(hc, u, game="orientation")
        if not dim == robust == orient:
            mismatches += 1
    elapsed = time.monotonic() - start
    return CriterionResult(
        1,
        "dimension matches both exact game values",
        mismatches == 0 and elapsed <= 600.0,
        f"scenarios={len(corpus)} mismatches={mismatches}",
    )


def criterion_2(scale: Scale, seed: int) -> CriterionResult:
    """Identity perturbations reduce to the classic dimension."""
    corpus = generate_corpus(
        CorpusParams(
            count=scale.classic_count, seed=_sub_seed(seed, 2), strata=("identity",)
        )
    )
    mismatches = 0
    for sc in corpus:
        hc, u = sc.hypotheses, sc.truth
        if adversarial_dimension(hc, u) != classic_littlestone_dimension(hc):
            mismatches += 1
    return CriterionResult(
        2,
        "identity maps agree with the classic dimension",
        mismatches == 0,
        f"scenarios={len(corpus)} mismatches={mismatches}",
    )


@lru_cache(maxsize=4)
def _conformance_sweep(scale: Scale, seed: int):
    """Shared by criteria 3 and 5: run the optimal learners on realizable
    sequences, collecting mistake-bound and dimension-monotonicity
    violations in one pass."""
    stats = {
        "games": 0,
        "bound_violations": 0,
        "monotone_violations": 0,
        "skipped_scenarios": 0,
    }
    specs = [
        (scale.conform_binary, 2, False),
        (scale.conform_multiclass, 3, True),
    ]
    for count, labels, multiclass in specs:
        corpus = generate_corpus(
            CorpusParams(
                count=count,
                seed=_sub_seed(seed, 3) + labels,
                label_count=labels,
            )
        )
        for idx, sc in enumerate(corpus):
            hc, u = sc.hypotheses, sc.truth
            dim = adversarial_dimension(hc, u, multiclass=multiclass)
            engine = get_engine(hc, u, multiclass)
            robust_ok = _robust_usable(hc, u)
            orient_ok = bool(
                realizable_orientation_rounds(
                    hc, u, 1, derive_rng(seed, "probe", labels, idx), multiclass=multiclass
                )
            )
            if not robust_ok and not orient_ok:
                stats["skipped_scenarios"] += 1
                continue
            for s in range(scale.conform_sequences):
                rng = derive_rng(seed, "conform", labels, idx, s)
                if robust_ok:
                    rounds = realizable_robust_rounds(
                        hc, u, scale.conform_horizon, rng
                    )
                    learner = RobustReductionLearner(
                        hc, u, multiclass=multiclass, strict=True
                    )
                    try:
                        played, _ = run_robust_game(
                            hc, u, learner, ScriptedRobustAdversary(rounds),
                            scale.conform_horizon,
                        )
                        if sum(r.loss for r in played) > dim:
                            stats["bound_violations"] += 1
                    except (ProtocolViolation, SearchInvariantError):
                        stats["bound_violations"] += 1
                    stats["games"] += 1
                if orient_ok:
                    rounds = realizable_orientation_rounds(
                        hc, u, scale.conform_horizon, rng, multiclass=multiclass
                    )
                    learner = SoaOrientationLearner(
                        hc, u, multiclass=multiclass, strict=True
                    )
                    mistakes = 0
                    try:
                        for query, side in rounds:
                            before = engine.dimension_of_mask(learner.mask)
                            wrong = learner.predict(query) != query.labels[side]
                            learner.update(query, side)
                            if wrong:
                                mistakes += 1
                                after = engine.dimension_of_mask(learner.mask)
                                if not after < before:
                                    stats["monotone_violations"] += 1
                        if mistakes > dim:
                            stats["bound_violations"] += 1
                    except ProtocolViolation:
                        stats["bound_violations"] += 1
                    stats["games"] += 1
    return stats


def criterion_3(scale: Scale, seed: int) -> CriterionResult:
    stats = _conformance_sweep(scale, seed)
    return CriterionResult(
        3,
        "optimal learners never exceed the dimension",
        stats["bound_violations"] == 0 and stats["games"] > 0,
        f"games={stats['games']} violations={stats['bound_violations']} "
        f"skipped={stats['skipped_scenarios']}",
    )


def criterion_5(scale: Scale, seed: int) -> CriterionResult:
    stats = _conformance_sweep(scale, seed)
    return CriterionResult(
        5,
        "every orientation mistake shrinks the dimension",
        stats["monotone_violations"] == 0 and stats["games"] > 0,
        f"games={stats['games']} violations={stats['monotone_violations']}",
    )


def criterion_4(scale: Scale, seed: int) -> CriterionResult:
    """Tree adversaries force exactly the dimension from the optimal
    learners and at least the dimension from every baseline."""
    corpus = generate_corpus(
        CorpusParams(count=scale.tree_scenarios, seed=_sub_seed(seed, 4))
    )
    exact_failures = 0
    baseline_failures = 0
    runs = 0
    for idx, sc in enumerate(corpus):
        hc, u = sc.hypotheses, sc.truth
        dim = adversarial_dimension(hc, u)
        tree = witness_tree(hc, u)

        learner = SoaOrientationLearner(hc, u, strict=True)
        played, _ = run_orientation_game(
            hc, u, learner, OrientationTreeAdversary(tree), dim
        )
        if sum(r.loss for r in played) != dim:
            exact_failures += 1
        learner = RobustReductionLearner(hc, u, strict=True)
        played, _ = run_robust_game(hc, u, learner, RobustTreeAdversary(tree, u), dim)
        if sum(r.loss for r in played) != dim:
            exact_failures += 1
        runs += 2

        for name in BASELINES:
            for game in ("orientation", "robust"):
                rng = derive_rng(seed, "crit4", idx, name, game)
                baseline = make_learner(name, game, hc, u, rng=rng, strict=False)
                if game == "orientation":
                    played, _ = run_orientation_game(
                        hc, u, baseline, OrientationTreeAdversary(tree), dim
                    )
                else:
                    played, _ = run_robust_game(
                        hc, u, baseline, RobustTreeAdversary(tree, u), dim
                    )
                if sum(r.loss for r in played) < dim:
                    baseline_failures += 1
                runs += 1
    return CriterionResult(
        4,
        "tree adversaries force the dimension",
        exact_failures == 0 and baseline_failures == 0,
        f"scenarios={len(corpus)} runs={runs} exact_failures={exact_failures} "
        f"baseline_failures={baseline_failures}",
    )


def criterion_6(scale: Scale, seed: int) -> CriterionResult:
    """Subset expert mistakes stay within dimension plus comparator loss."""
    corpus = generate_corpus(
        CorpusParams(count=scale.decomp_scenarios * 4, seed=_sub_seed(seed, 6))
    )
    used = 0
    violations = 0
    for idx, sc in enumerate(corpus):
        if used >= scale.decomp_scenarios:
            break
        hc, u = sc.hypotheses, sc.truth
        if not _robust_usable(hc, u):
            continue
        rng = derive_rng(seed, "crit6", idx)
        rounds = realizable_robust_rounds(hc, u, 10, rng)
        rounds = corrupt_labels(rounds, used % 4, hc.label_count, rng)
        if decomposition_gap(hc, u, rounds)["gap"] < 0:
            violations += 1
        used += 1
    return CriterionResult(
        6,
        "subset expert within dimension plus comparator",
        violations == 0 and used >= scale.decomp_scenarios,
        f"sequences={used} violations={violations}",
    )


def criterion_7(scale: Scale, seed: int) -> CriterionResult:
    """Forecaster regret within the known-horizon bound on loss matrices."""
    worst_excess = -math.inf
    combos = 0
    for n in scale.ewa_sizes:
        for horizon in scale.ewa_horizons:
            rng = derive_rng(seed, "crit7-losses", n, horizon)
            losses = (rng.random((n, horizon)) < 0.5).astype(float)
            losses[0] = (rng.random(horizon) < 0.3).astype(float)
            rate = horizon_rate(n, horizon)
            weights = np.ones(n)
            probs = np.empty(horizon)
            for t in range(horizon):
                probs[t] = weights @ losses[:, t] / weights.sum()
                weights = weights * np.exp(-rate * losses[:, t])
                weights /= weights.max()
            best = float(losses.sum(axis=1).min())
            sample_rng = derive_rng(seed, "crit7-samples", n, horizon)
            draws = sample_rng.random((scale.ewa_seeds, horizon))
            totals = (draws < probs[None, :]).sum(axis=1).astype(float)
            regrets = totals - best
            mean = float(regrets.mean())
            se = float(regrets.std(ddof=1) / math.sqrt(len(regrets)))
            excess = mean - horizon_regret_bound(n, horizon) - 3 * se
            worst_excess = max(worst_excess, excess)
            combos += 1
    return CriterionResult(
        7,
        "forecaster regret within the horizon bound",
        worst_excess <= 0,
        f"combos={combos} worst_excess={worst_excess:.4f}",
    )


def criterion_8(scale: Scale, seed: int) -> CriterionResult:
    """Aggregated subset experts meet the agnostic regret bound."""
    corpus = generate_corpus(
        CorpusParams(count=scale.agnostic_scenarios * 8, seed=_sub_seed(seed, 8))
    )
    used = 0
    worst_ratio = -math.inf
    failures = 0
    horizon = scale.agnostic_horizon
    for idx, sc in enumerate(corpus):
        if used >= scale.agnostic_scenarios:
            break
        hc, u = sc.hypotheses, sc.truth
        dim = adversarial_dimension(hc, u)
        if not 1 <= dim <= 2 or not _robust_usable(hc, u):
            continue
        rng = derive_rng(seed, "crit8", idx)
        rounds = realizable_robust_rounds(hc, u, horizon, rng)
        rounds = corrupt_labels(rounds, 2, hc.label_count, rng)
        mc = mc_regret(hc, u, rounds, seeds=range(scale.agnostic_seeds), dimension=dim)
        bound = dim + math.sqrt(horizon / 2 * math.log(mc["expert_count"]))
        ratio = mc["mean"] / bound
        worst_ratio = max(worst_ratio, ratio)
        if mc["mean"] > bound:
            failures += 1
        used += 1
    return CriterionResult(
        8,
        "aggregated learner within the agnostic regret bound",
        failures == 0 and used >= scale.agnostic_scenarios,
        f"scenarios={used} failures={failures} worst_ratio={worst_ratio:.4f}",
    )


def criterion_9(scale: Scale, seed: int) -> CriterionResult:
    """Phased halving within its total and per-phase mistake bounds."""
    scenarios = generate_family_scenarios(
        scale.halving_scenarios, seed=_sub_seed(seed, 9)
    )
    total_violations = 0
    phase_violations = 0
    for idx, sc in enumerate(scenarios):
        hc, family = sc.hypotheses, sc.family()
        u_star = family.truth
        dim = adversarial_dimension(hc, u_star)
        size = len(family)
        rng = derive_rng(seed, "crit9", idx)
        rounds = realizable_robust_rounds(hc, u_star, scale.halving_horizon, rng)
        report = family_halving_run(hc, family, rounds)
        per_phase = math.ceil(math.log2(size))
        if report.mistakes > (dim + 1) * per_phase:
            total_violations += 1
        if report.max_phase_mistakes > per_phase:
            phase_violations += 1
    return CriterionResult(
        9,
        "phased halving within its mistake bounds",
        total_violations == 0 and phase_violations == 0 and bool(scenarios),
        f"scenarios={len(scenarios)} total_violations={total_violations} "
        f"phase_violations={phase_violations}",
    )


def criterion_10(scale: Scale, seed: int) -> CriterionResult:
    """Family forecaster within the loss-budget bound."""
    scenarios = generate_family_scenarios(
        scale.family_scenarios, seed=_sub_seed(seed, 10)
    )
    worst_ratio = -math.inf
    failures = 0
    for idx, sc in enumerate(scenarios):
        hc, family = sc.hypotheses, sc.family()
        rng = derive_rng(seed, "crit10", idx)
        rounds = realizable_robust_rounds(
            hc, family.truth, scale.family_horizon, rng
        )
        mc = mc_family_mistakes(hc, family, rounds, seeds=range(scale.family_seeds))
        budget, n = mc["budget"], len(family)
        bound = budget + math.sqrt(2) * (
            math.sqrt(budget * math.log(n)) + math.log(n)
        )
        ratio = mc["mean"] / bound
        worst_ratio = max(worst_ratio, ratio)
        if ratio > 1:
            failures += 1
    return CriterionResult(
        10,
        "family forecaster within the loss-budget bound",
        failures == 0 and bool(scenarios),
        f"scenarios={len(scenarios)} failures={failures} "
        f"worst_ratio={worst_ratio:.4f}",
    )


def criterion_11(scale: Scale, seed: int) -> CriterionResult:
    """Random-label regret grows like the square root of the horizon."""
    hc = full_class(2)
    u = total_map(2)
    means = []
    for horizon in scale.trend_horizons:
        total = 0
        for s in range(scale.trend_seeds):
            probe_seed = _sub_seed(seed, 11) * 100000 + horizon * 10 + s * 7
            total += random_label_regret_sample(hc, u, horizon, probe_seed)["regret"]
        means.append(total / scale.trend_seeds)
    if min(means) <= 0:
        return CriterionResult(
            11, "random-label regret square-root trend", False, "nonpositive mean"
        )
    slope = float(
        np.polyfit(np.log(scale.trend_horizons), np.log(means), 1)[0]
    )
    return CriterionResult(
        11,
        "random-label regret square-root trend",
        0.4 <= slope <= 0.6,
        f"horizons={list(scale.trend_horizons)} slope={slope:.4f}",
    )


def criterion_12(scale: Scale, seed: int) -> CriterionResult:
    """Two subprocess check runs produce byte-identical output."""
    cmd = [
        sys.executable,
        "-m",
        "robust_online",
        "check",
        "--scale",
        "smoke",
        "--criteria",
        "1-11",
        "--seed",
        str(seed),
    ]
    first = subprocess.run(cmd, capture_output=True, timeout=1800)
    second = subprocess.run(cmd, capture_output=True, timeout=1800)
    identical = first.stdout == second.stdout and first.returncode == second.returncode
    return CriterionResult(
        12,
        "check output is byte-reproducible",
        identical,
        f"bytes={len(first.stdout)} identical={str(identical).lower()}",
    )


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
}


def parse_criteria_spec(text: str) -> list[int]:
    """Parse "1,3,5-7" style selections into sorted criterion numbers."""
    out = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.update(range(int(lo), int(hi) + 1))
        else:
            out.add(int(part))
    bad = out - set(CRITERIA)
    if bad:
        raise ValueError(f"unknown criteria {sorted(bad)}; valid are 1..12")
    return sorted(out)


def run_criteria(scale: Scale, numbers, seed: int, echo=None, timing=None):
    """Run the selected criteria in order; returns the result list.

    echo(line) receives the deterministic result lines; timing(text)
    receives wall-clock notes and must not be mixed into echo's stream.
    """
    results = []
    for n in numbers:
        start = time.monotonic()
        result = CRITERIA[n](scale, seed)
        elapsed = time.monotonic() - start
        results.append(result)
        if echo:
            echo(result.line())
        if timing:
            timing(f"criterion {n} took {elapsed:.1f}s")
    return results
