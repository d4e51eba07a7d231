"""End-to-end acceptance checks.

Each criterion function runs one self-contained experiment at pinned
parameters and tolerances and returns a ``CheckResult``; ``run_criteria``
drives them all (the ``verify`` CLI subcommand and the acceptance test
module are thin wrappers).  Stated runtime budgets assume the compiled
kernel backend and count toward the verdict.

Results are deterministic for a given master seed: every instance, trial
and run seed is fanned out with ``derive_seed``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .analysis import (
    ball_density_limit,
    heavy_balls_vanished,
    heavy_density_limit,
    light_heavy_profile,
    peeling_threshold,
    simulate_continuous_peeling,
)
from .cuckoo import bulk_insert_experiment
from .eviction import POLICIES, run_rep_prime
from .hypergraph import Hypergraph, sample_hypergraph
from .peeling import (
    Peeling,
    brute_force_path_count,
    build_vertex_dependence_graph,
    count_paths,
    peel,
    peeling_numbers,
    two_core,
    vertex_peeling_numbers,
)
from .rng import derive_seed

DEFAULT_SEED = 1

__all__ = ["CheckResult", "run_criteria", "run_quick", "ALL_CRITERIA", "DEFAULT_SEED"]


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    budget: float
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] criterion {self.number:2d} {self.name} ({self.elapsed:.1f}s)"


def _finish(
    number: int, name: str, t0: float, budget: float, ok: bool, details: dict
) -> CheckResult:
    elapsed = time.perf_counter() - t0
    details["within_budget"] = elapsed <= budget
    return CheckResult(
        number=number,
        name=name,
        passed=bool(ok) and elapsed <= budget,
        elapsed=elapsed,
        budget=budget,
        details=details,
    )


def criterion_1(seed: int = DEFAULT_SEED) -> CheckResult:
    """Threshold solver reproduces the reference constants for k = 3..7."""
    t0 = time.perf_counter()
    expected = {3: 0.818, 4: 0.772, 5: 0.702, 6: 0.637, 7: 0.582}
    got = {k: peeling_threshold(k).c_delta for k in expected}
    ok = all(round(got[k], 3) == expected[k] for k in expected)
    return _finish(
        1,
        "peeling thresholds to three decimals",
        t0,
        1.0,
        ok,
        {"computed": {k: round(v, 6) for k, v in got.items()}},
    )


def criterion_2(seed: int = DEFAULT_SEED) -> CheckResult:
    """Peelability phase transition at n = 1e5, k = 3."""
    t0 = time.perf_counter()
    n, k, seeds = 100_000, 3, 100
    empty_below = sum(
        two_core(sample_hypergraph(n, int(0.78 * n), k, derive_seed(seed, i))).empty
        for i in range(seeds)
    )
    nonempty_above = sum(
        not two_core(
            sample_hypergraph(n, int(0.86 * n), k, derive_seed(seed, seeds + i))
        ).empty
        for i in range(seeds)
    )
    ok = empty_below >= 99 and nonempty_above >= 99
    return _finish(
        2,
        "2-core phase transition",
        t0,
        120.0,
        ok,
        {"empty_at_0.78n": empty_below, "nonempty_at_0.86n": nonempty_above},
    )


def criterion_3(seed: int = DEFAULT_SEED) -> CheckResult:
    """Amortised O(1) random-walk insertion: mean moves per key is flat in n."""
    t0 = time.perf_counter()
    k, load, trials = 3, 0.75, 20
    small = bulk_insert_experiment(10_000, k, load, derive_seed(seed, 0), trials=trials)
    big = bulk_insert_experiment(1_000_000, k, load, derive_seed(seed, 1), trials=trials)
    ratio = max(small.mean_moves, big.mean_moves) / min(
        small.mean_moves, big.mean_moves
    )
    no_caps = small.total_failures == 0 and big.total_failures == 0
    ok = ratio <= 1.2 and no_caps
    return _finish(
        3,
        "O(1) amortised insertion across n",
        t0,
        600.0,
        ok,
        {
            "mean_moves_1e4": small.mean_moves,
            "mean_moves_1e6": big.mean_moves,
            "ratio": ratio,
            "cap_hits": small.total_failures + big.total_failures,
        },
    )


def criterion_4(seed: int = DEFAULT_SEED) -> CheckResult:
    """Above the load threshold, insertion runs hit the move cap."""
    t0 = time.perf_counter()
    summary = bulk_insert_experiment(
        10_000, 3, 0.95, derive_seed(seed, 0), trials=100
    )
    failed_trials = sum(1 for tr in summary.trials if tr.failures > 0)
    ok = failed_trials >= 95
    return _finish(
        4,
        "cap-exceeded above load threshold",
        t0,
        300.0,
        ok,
        {"trials_with_cap_hit": failed_trials},
    )


def _peelable_instances(
    count: int, n: int, m: int, k: int, seed: int
) -> list[tuple[Hypergraph, Peeling]]:
    """Deterministic battery of peelable instances with random peelings;
    non-peelable candidates are skipped."""
    out = []
    cand = 0
    while len(out) < count:
        s = derive_seed(seed, cand)
        cand += 1
        H = sample_hypergraph(n, m, k, s)
        peeling = peel(H, seed=derive_seed(s, 1), randomize=True)
        if isinstance(peeling, Peeling):
            out.append((H, peeling))
    return out


def criterion_5(
    seed: int = DEFAULT_SEED, instances: int = 100, runs: int = 50
) -> CheckResult:
    """Mean targeted-eviction rounds stay below 1.05 * k*(m + total peel),
    per instance and policy.

    Marginal by design at the full 100-instance scale: the max-peel
    adversary provably attains E[rounds] = k*(m + total peel) with equality
    (a dependency has a strictly smaller peeling number than its dependents,
    so it only ever moves while they sit on target, which is exactly the
    equality case of the move recursion).  The 50-run mean of a quantity
    with ~14% run-to-run spread then exceeds a 5% margin over its own mean
    in roughly 0.7% of pairs, and the maximum over ~100 saturated pairs
    lands right at the margin; whether the check passes is a coin flip in
    the master seed.  The expectation-level inequality itself holds (see
    ``mean_ratio_max_peel``, and per-edge means match k*(1+peel) to <0.1%
    at 4e5 runs).
    """
    t0 = time.perf_counter()
    n, k = 1000, 3
    m = int(0.75 * n)
    worst = 0.0
    checked = 0
    ok = True
    maxpeel_ratios = []
    for i, (H, peeling) in enumerate(
        _peelable_instances(instances, n, m, k, derive_seed(seed, 0))
    ):
        raw_bound = k * (m + peeling_numbers(H, peeling).total_peel)
        bound = 1.05 * raw_bound
        for p, policy in enumerate(POLICIES):
            total = 0
            for r in range(runs):
                run = run_rep_prime(
                    H, peeling, policy, derive_seed(seed, 1 + i * 1000 + p * 100 + r)
                )
                if not run.trace.done:
                    ok = False
                total += run.trace.rounds
            mean_rounds = total / runs
            worst = max(worst, mean_rounds / bound)
            if policy == "max-peel":
                maxpeel_ratios.append(mean_rounds / raw_bound)
            checked += 1
            if mean_rounds > bound:
                ok = False
    return _finish(
        5,
        "targeted eviction round bound",
        t0,
        600.0,
        ok,
        {
            "policy_instance_pairs": checked,
            "worst_mean_to_bound_ratio": worst,
            "mean_ratio_max_peel": float(np.mean(maxpeel_ratios))
            if maxpeel_ratios
            else None,
        },
    )


_small_instance_cache: dict = {}


def _small_instances(seed: int, count: int) -> list[tuple[Hypergraph, Peeling]]:
    key = (seed, count)
    if key not in _small_instance_cache:
        out = []
        cand = 0
        base = derive_seed(seed, 777)
        while len(out) < count:
            s = derive_seed(base, cand)
            cand += 1
            n = 3 + derive_seed(s, 0) % 28  # n in [3, 30]
            m = min(20, 1 + derive_seed(s, 1) % max(1, (7 * n) // 10))
            H = sample_hypergraph(n, m, 3, derive_seed(s, 2))
            peeling = peel(H, seed=derive_seed(s, 3), randomize=True)
            if isinstance(peeling, Peeling):
                out.append((H, peeling))
        _small_instance_cache[key] = out
    return _small_instance_cache[key]


def criterion_6(seed: int = DEFAULT_SEED, instances: int = 200) -> CheckResult:
    """Path-count propagation equals brute-force DFS enumeration, and edge
    peeling numbers equal their vertex counterparts, exactly."""
    t0 = time.perf_counter()
    ok = True
    compared = 0
    for H, peeling in _small_instances(seed, instances):
        G = build_vertex_dependence_graph(H, peeling)
        for v_end in range(H.n):
            fast = count_paths(H, peeling, v_end)
            slow = brute_force_path_count(G, v_end)
            compared += 1
            if fast.overflow or fast.count != slow:
                ok = False
        report = peeling_numbers(H, peeling)
        vpeel = vertex_peeling_numbers(H, peeling)
        for e in range(H.m):
            if int(report.edge_peel[e]) != int(vpeel[peeling.orientation[e]]):
                ok = False
    return _finish(
        6,
        "path-count oracle equivalence",
        t0,
        60.0,
        ok,
        {"instances": instances, "path_counts_compared": compared},
    )


def criterion_7(seed: int = DEFAULT_SEED, instances: int = 200) -> CheckResult:
    """Total peel is at most the total ending-path count minus n, exactly."""
    t0 = time.perf_counter()
    ok = True
    for H, peeling in _small_instances(seed, instances):
        report = peeling_numbers(H, peeling)
        if report.overflow:
            ok = False
            continue
        rhs = int(sum(int(x) for x in report.ending_paths)) - H.n
        if report.total_peel > rhs:
            ok = False
    return _finish(
        7,
        "peel total vs ending-path inequality",
        t0,
        60.0,
        ok,
        {"instances": instances},
    )


_TRAJ_REGIME = {"n": 100_000, "c": 0.7, "k": 3, "t0": 3.0, "seeds": 100}


def criterion_8(seed: int = DEFAULT_SEED) -> CheckResult:
    """Single-run trajectory tracks the closed-form limits within 0.01."""
    t0 = time.perf_counter()
    n, c, k = _TRAJ_REGIME["n"], _TRAJ_REGIME["c"], _TRAJ_REGIME["k"]
    grid = np.round(np.arange(0.0, 4.0001, 0.05), 10)
    traj = simulate_continuous_peeling(n, int(c * n), k, derive_seed(seed, 0), grid)
    on_grid = np.isin(traj.times, grid)
    times = traj.times[on_grid]
    b_err = np.abs(
        traj.balls[on_grid] / n
        - np.array([ball_density_limit(math.exp(-t), c, k) for t in times])
    )
    h_err = np.abs(
        traj.heavy[on_grid] / n
        - np.array([heavy_density_limit(math.exp(-t), c, k) for t in times])
    )
    ok = float(b_err.max()) <= 0.01 and float(h_err.max()) <= 0.01
    return _finish(
        8,
        "trajectory matches closed-form limits",
        t0,
        60.0,
        ok,
        {"sup_ball_err": float(b_err.max()), "sup_heavy_err": float(h_err.max())},
    )


_profile_cache: dict = {}


def _trajectory_profiles(seed: int) -> list[dict]:
    """Per-seed light/heavy verdicts for the shared 100-run regime."""
    if seed not in _profile_cache:
        n, c, k = _TRAJ_REGIME["n"], _TRAJ_REGIME["c"], _TRAJ_REGIME["k"]
        t0, seeds = _TRAJ_REGIME["t0"], _TRAJ_REGIME["seeds"]
        m = int(c * n)
        grid = np.round(np.arange(0.0, 4.0001, 0.05), 10)
        records = []
        for i in range(seeds):
            traj = simulate_continuous_peeling(n, m, k, derive_seed(seed, 100 + i), grid)
            prof = light_heavy_profile(traj, t0, k)
            records.append(
                {
                    "reached_t0": prof.reached_t0,
                    "min_light": prof.min_light_before,
                    "heavy_bounded": prof.heavy_bounded_after,
                    "max_heavy_ratio": prof.max_heavy_ratio_after,
                    "vanished": heavy_balls_vanished(traj, m),
                }
            )
        _profile_cache[seed] = records
    return _profile_cache[seed]


def criterion_9(seed: int = DEFAULT_SEED) -> CheckResult:
    """Light-ball floor before t0 and heavy-ball ceiling after t0.

    Known to fail at these pinned parameters: with c = 0.7, k = 3 the
    heavy/survivor ratio at t = 3 concentrates near 0.45, far above the
    required 1/(2k) ~ 0.167 (the ratio only drops below 1/6 near t ~ 5.1,
    where the light-ball floor of 0.01*n no longer holds).  The check is
    still asserted as stated.
    """
    t0 = time.perf_counter()
    n = _TRAJ_REGIME["n"]
    records = _trajectory_profiles(seed)
    good = sum(
        1
        for r in records
        if r["reached_t0"] and r["min_light"] >= 0.01 * n and r["heavy_bounded"]
    )
    ok = good >= 99
    return _finish(
        9,
        "light floor and heavy ceiling at t0=3",
        t0,
        1800.0,
        ok,
        {
            "seeds_passing_all_three": good,
            "seeds_reaching_t0": sum(1 for r in records if r["reached_t0"]),
            "seeds_with_light_floor": sum(
                1 for r in records if r["min_light"] >= 0.01 * n
            ),
            "seeds_with_heavy_bounded": sum(
                1 for r in records if r["heavy_bounded"]
            ),
            "median_max_heavy_ratio": float(
                np.median([r["max_heavy_ratio"] for r in records])
            ),
        },
    )


def criterion_10(seed: int = DEFAULT_SEED) -> CheckResult:
    """Heavy balls gone by (3/5)ln(m) in at least 95 of 100 seeds.

    Known to fail at these pinned parameters: the expected number of heavy
    balls at the cutoff is about (c*k)^2 * n * e^(-2t) ~ 0.67, so a heavy
    pair survives past the cutoff in roughly a quarter of the runs; the
    vanishing only wins out asymptotically.  The check is still asserted as
    stated.
    """
    t0 = time.perf_counter()
    records = _trajectory_profiles(seed)
    good = sum(1 for r in records if r["vanished"])
    ok = good >= 95
    return _finish(
        10,
        "heavy balls vanish by (3/5)ln(m)",
        t0,
        1800.0,
        ok,
        {"seeds_vanished": good},
    )


def criterion_11(seed: int = DEFAULT_SEED, trials: int = 20) -> CheckResult:
    """Total peel per vertex is flat in n (linear total peel)."""
    t0 = time.perf_counter()
    k, c = 3, 0.75
    means = {}
    for j, n in enumerate((10_000, 100_000)):
        totals = []
        for H, peeling in _peelable_instances(
            trials, n, int(c * n), k, derive_seed(seed, 50 + j)
        ):
            totals.append(peeling_numbers(H, peeling).total_peel / n)
        means[n] = float(np.mean(totals))
    ratio = max(means.values()) / min(means.values())
    ok = ratio <= 1.3
    return _finish(
        11,
        "total peel scales linearly",
        t0,
        300.0,
        ok,
        {"mean_total_peel_per_n": means, "ratio": ratio},
    )


ALL_CRITERIA = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
]


def run_criteria(numbers=None, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Run the selected acceptance criteria (all by default)."""
    wanted = set(numbers) if numbers else set(range(1, len(ALL_CRITERIA) + 1))
    out = []
    for i, fn in enumerate(ALL_CRITERIA, start=1):
        if i in wanted:
            out.append(fn(seed=seed))
    return out


def run_quick(seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Small-instance oracle suites: thresholds, path-count equivalence, the
    peel-total inequality, and a reduced round-bound check."""
    return [
        criterion_1(seed=seed),
        criterion_6(seed=seed, instances=40),
        criterion_7(seed=seed, instances=40),
        criterion_5(seed=seed, instances=10, runs=10),
    ]
