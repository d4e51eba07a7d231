"""End-to-end acceptance suite.

Each test runs one acceptance criterion at its pinned parameters and
tolerances (see ``cuckoopeel.checks``) and prints one PASS/FAIL line plus
the measured details.  The stated runtime budgets assume the compiled
kernel backend and count toward the verdict.

Three criteria are known to fail and are asserted as stated anyway; their
docstrings and the check docstrings give the quantitative analysis:

* criterion 5 is a coin flip in the master seed (the adversarial schedule
  provably saturates the round bound with equality, leaving the 5% slack
  to cover the maximum of ~100 fifty-run sample means);
* criteria 9 and 10 encode asymptotic (n -> infinity) vanishing claims
  whose finite-size constants at n = 1e5 sit far on the wrong side of the
  pinned thresholds.
"""

from cuckoopeel import checks


def _run(fn, **kwargs):
    result = fn(**kwargs)
    print()
    print(result.line())
    for key, value in sorted(result.details.items()):
        print(f"    {key} = {value}")
    assert result.passed, f"{result.name}: {result.details}"


def test_criterion_01_threshold_reproduction():
    """Threshold solver reproduces 0.818/0.772/0.702/0.637/0.582 for
    k = 3..7, each to three decimals, in under a second."""
    _run(checks.criterion_1)


def test_criterion_02_peelability_phase_transition():
    """At n = 1e5, k = 3 the 2-core is empty in >= 99/100 seeds at load 0.78
    and non-empty in >= 99/100 seeds at load 0.86."""
    _run(checks.criterion_2)


def test_criterion_03_constant_amortised_insertion():
    """Sequential random-walk insertion at load 0.75, k = 3: mean moves per
    key over 20 seeds differs by a factor <= 1.2 between n = 1e4 and
    n = 1e6, and no insertion hits the move cap."""
    _run(checks.criterion_3)


def test_criterion_04_failure_above_load_threshold():
    """At load 0.95 > the orientability threshold, k = 3, n = 1e4, at least
    95/100 seeds hit the per-insertion move cap."""
    _run(checks.criterion_4)


def test_criterion_05_round_bound_per_policy():
    """Mean targeted-eviction rounds over 50 runs stay within 1.05 times
    k*(m + total peel) for every built-in policy on 100 peelable instances
    (n = 1000, m = 750, k = 3).

    Known marginal: the max-peel schedule attains the bound with equality
    in expectation, so the margin must absorb the maximum of ~100 noisy
    sample means; at the default master seed one pair lands ~0.3% over.
    See ``checks.criterion_5`` for the equality argument and the
    high-precision evidence that the expectation-level bound itself holds.
    """
    _run(checks.criterion_5)


def test_criterion_06_path_count_oracle_equivalence():
    """Propagation-based path counts equal brute-force DFS enumeration for
    every end vertex on 200 small peelable instances, and edge peeling
    numbers equal their vertex-graph counterparts, exactly."""
    _run(checks.criterion_6)


def test_criterion_07_ending_path_inequality():
    """On the same instances, the total peel is at most the total
    ending-path count minus n, exactly."""
    _run(checks.criterion_7)


def test_criterion_08_trajectory_matches_limits():
    """A single n = 1e5, load 0.7, k = 3 run tracks the closed-form ball and
    heavy-ball density limits within 0.01 uniformly over the grid [0, 4]."""
    _run(checks.criterion_8)


def test_criterion_09_light_floor_and_heavy_ceiling():
    """t0 = 3 must give tau >= t0, at least 0.01*n light balls on [0, t0]
    and heavy <= balls/(2k) on [t0, tau], in >= 99/100 seeds.

    Known to fail: at load 0.7, k = 3 the heavy/survivor ratio at t = 3
    concentrates near 0.45 (limit value 0.445), nearly three times the
    required 1/6.  The ratio only drops below 1/6 near t = 5.1, where the
    light-ball floor of 0.01*n no longer holds, so no single t0 satisfies
    both halves at these parameters; the conjunction holds only in the
    n -> infinity limit with t0 chosen per sub-claim.
    """
    _run(checks.criterion_9)


def test_criterion_10_heavy_balls_vanish():
    """No heavy ball may be seen at any sampled time past (3/5)ln(m) in at
    least 95/100 seeds.

    Known to fail: the expected number of co-located surviving ball pairs
    at the cutoff is (c*k)^2 * n * e^(-2t) / 2 ~ 0.34 at n = 1e5, so a
    heavy pair survives past the cutoff in roughly a quarter of runs
    (measured: ~22/100).  The probability vanishes like m^(-1/5)
    asymptotically, far too slowly to clear a 95% bar at this scale.
    """
    _run(checks.criterion_10)


def test_criterion_11_total_peel_linearity():
    """Mean total peel per vertex at load 0.75, k = 3 differs by a factor
    <= 1.3 between n = 1e4 and n = 1e5 (20 seeds each)."""
    _run(checks.criterion_11)
