"""Limiting trajectories, peeling thresholds, and continuous-time peeling.

The peeling process on a random k-uniform hypergraph with load c = m/n,
embedded in continuous time, has per-vertex ball counts that concentrate
around closed-form limits: with p = e^(-t),

* ``ball_density_limit(p, c, k) = c*k*p**(k/(k-1))`` is the limit of
  B(t)/n, the surviving-ball density, and
* ``heavy_density_limit(p, c, k) = c*k*p*(1 - exp(-c*k*p))`` is the limit
  of H(t)/n, the density of balls sharing their vertex with another
  survivor.

The two curves meet at a non-trivial p exactly when c reaches
``min over lam > 0 of lam / (k*(1 - exp(-lam))**(k-1))``, the threshold
below which the 2-core is empty with high probability; the solver here
reproduces the classic table of those constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import InvalidParameterError
from .hypergraph import Hypergraph
from .peeling import Peeling
from .rng import GOLDEN, derive_seed

__all__ = [
    "ball_density_limit",
    "heavy_density_limit",
    "ThresholdResult",
    "peeling_threshold",
    "reference_thresholds",
    "PeelTrajectory",
    "LightHeavyProfile",
    "simulate_continuous_peeling",
    "simulate_pure_death",
    "light_heavy_profile",
    "smallest_heavy_bounded_t0",
    "heavy_balls_vanished",
]


def _check_domain(p: float, c: float, k: int) -> None:
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError("p must lie in [0, 1]")
    if not c > 0.0:
        raise InvalidParameterError("load c must be positive")
    if k < 2:
        raise InvalidParameterError("uniformity k must be >= 2")


def ball_density_limit(p: float, c: float, k: int) -> float:
    """Limit of B(t)/n at p = e^(-t)."""
    _check_domain(p, c, k)
    return c * k * p ** (k / (k - 1))


def heavy_density_limit(p: float, c: float, k: int) -> float:
    """Limit of H(t)/n at p = e^(-t)."""
    _check_domain(p, c, k)
    return c * k * p * (1.0 - math.exp(-c * k * p))


@dataclass(frozen=True)
class ThresholdResult:
    k: int
    lambda_star: float  # minimizer of the threshold objective
    c_delta: float  # the peeling threshold value


def _threshold_objective(lam: float, k: int) -> float:
    return lam / (k * (1.0 - math.exp(-lam)) ** (k - 1))


def peeling_threshold(k: int) -> ThresholdResult:
    """Peeling threshold for uniformity ``k >= 3``.

    Minimizes ``lam / (k*(1 - e^(-lam))**(k-1))`` over ``lam in (0, 60]`` by
    a 10^4-point grid scan (robust against non-unimodality) followed by
    golden-section refinement to width 1e-10.
    """
    if k < 3:
        raise InvalidParameterError("peeling threshold requires k >= 3")
    grid_points = 10_000
    hi = 60.0
    best_i = 1
    best = math.inf
    for i in range(1, grid_points + 1):
        lam = hi * i / grid_points
        g = _threshold_objective(lam, k)
        if g < best:
            best = g
            best_i = i
    lo = hi * max(best_i - 1, 1) / grid_points
    up = hi * min(best_i + 1, grid_points) / grid_points

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, up
    c1 = b - invphi * (b - a)
    c2 = a + invphi * (b - a)
    f1 = _threshold_objective(c1, k)
    f2 = _threshold_objective(c2, k)
    while b - a > 1e-10:
        if f1 <= f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - invphi * (b - a)
            f1 = _threshold_objective(c1, k)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + invphi * (b - a)
            f2 = _threshold_objective(c2, k)
    lam = 0.5 * (a + b)
    return ThresholdResult(k=k, lambda_star=lam, c_delta=_threshold_objective(lam, k))


# Reference constants: for 2 <= k <= 7 and 1 <= l <= 6 the pair
# (peeling threshold / l, load threshold / l), rounded to three decimals;
# the k=2, l=1 peeling entry does not exist.  The l=1 peeling column is
# recomputed independently by peeling_threshold(); the load thresholds come
# from orientability theory and are stored as data only.
_REFERENCE_TABLE: dict[tuple[int, int], tuple[float, float]] = {
    (2, 1): (math.nan, 0.500),
    (3, 1): (0.818, 0.918),
    (4, 1): (0.772, 0.977),
    (5, 1): (0.702, 0.992),
    (6, 1): (0.637, 0.997),
    (7, 1): (0.582, 0.999),
    (2, 2): (0.838, 0.897),
    (3, 2): (0.776, 0.988),
    (4, 2): (0.667, 0.998),
    (5, 2): (0.579, 1.0),
    (6, 2): (0.511, 1.0),
    (7, 2): (0.457, 1.0),
    (2, 3): (0.858, 0.959),
    (3, 3): (0.725, 0.997),
    (4, 3): (0.604, 1.0),
    (5, 3): (0.515, 1.0),
    (6, 3): (0.450, 1.0),
    (7, 3): (0.399, 1.0),
    (2, 4): (0.850, 0.980),
    (3, 4): (0.687, 0.999),
    (4, 4): (0.562, 1.0),
    (5, 4): (0.476, 1.0),
    (6, 4): (0.412, 1.0),
    (7, 4): (0.364, 1.0),
    (2, 5): (0.837, 0.990),
    (3, 5): (0.658, 1.0),
    (4, 5): (0.533, 1.0),
    (5, 5): (0.448, 1.0),
    (6, 5): (0.387, 1.0),
    (7, 5): (0.341, 1.0),
    (2, 6): (0.823, 0.994),
    (3, 6): (0.635, 1.0),
    (4, 6): (0.511, 1.0),
    (5, 6): (0.427, 1.0),
    (6, 6): (0.368, 1.0),
    (7, 6): (0.323, 1.0),
}


def reference_thresholds(k: int, bucket_size: int) -> tuple[float, float]:
    """Stored (peeling threshold / l, load threshold / l) pair for uniformity
    ``k`` and bucket size ``l``.  The missing k=2, l=1 peeling entry is NaN."""
    try:
        return _REFERENCE_TABLE[(k, bucket_size)]
    except KeyError:
        raise InvalidParameterError(
            f"no stored thresholds for k={k}, bucket size {bucket_size}"
        ) from None


@dataclass(frozen=True)
class PeelTrajectory:
    """Sampled counts from one continuous-time peeling run.

    Samples cover every grid time and every round boundary in time order;
    ``light + heavy == balls`` everywhere.  ``tau`` is the time of the last
    removal, or the first time no light ball exists; ``terminated_empty``
    tells the two apart.  ``edges``/``owners`` hold the hyperedge emitted by
    each round and the vertex of the light ball that started it.
    """

    n: int
    m: int
    k: int
    seed: int
    times: np.ndarray
    balls: np.ndarray
    heavy: np.ndarray
    light: np.ndarray
    tau: float
    terminated_empty: bool
    edges: np.ndarray  # (rounds, k) uint32
    owners: np.ndarray  # uint32[rounds]

    @property
    def rounds(self) -> int:
        return len(self.owners)

    def peeled_hypergraph(self) -> tuple[Hypergraph, Peeling]:
        """The emitted hypergraph with its orientation and round order.

        When the run terminated empty this is a hypergraph on all m edges
        and the rounds form a peeling of it; otherwise it covers the peeled
        prefix only.
        """
        H = Hypergraph(n=self.n, k=self.k, incidences=self.edges, seed=0)
        return H, Peeling(
            orientation=self.owners.astype(np.int64),
            order=np.arange(self.rounds, dtype=np.int64),
        )


def simulate_continuous_peeling(
    n: int, m: int, k: int, seed: int, sample_grid
) -> PeelTrajectory:
    """Continuous-time peeling of the configuration model with k*m balls.

    Each ball gets a uniform vertex and an Exp(1) lifetime; every round
    removes a uniformly random light ball instantly and then the next k-1
    balls to die, emitting one hyperedge.  Stops when no light ball exists.
    """
    if n < 1 or k < 2 or m < 0:
        raise InvalidParameterError("need n >= 1, k >= 2, m >= 0")
    grid = np.asarray(sample_grid, dtype=np.float64)
    if grid.ndim != 1:
        raise InvalidParameterError("sample_grid must be one-dimensional")
    if len(grid) and (np.any(np.diff(grid) < 0) or grid[0] < 0):
        raise InvalidParameterError("sample_grid must be sorted and non-negative")
    times, balls, heavy, light, tau, emptied, edges, owners = (
        kernels.continuous_peel_kernel(n, m, k, seed, grid)
    )
    return PeelTrajectory(
        n=n,
        m=m,
        k=k,
        seed=seed,
        times=times,
        balls=balls,
        heavy=heavy,
        light=light,
        tau=float(tau),
        terminated_empty=bool(emptied),
        edges=edges.reshape(-1, k),
        owners=owners,
    )


def simulate_pure_death(m: int, k: int, seed: int, sample_grid) -> list[tuple[float, int]]:
    """Pure death process: (k-1)*m elements with i.i.d. Exp(k/(k-1))
    lifetimes; returns the survivor count at each grid time."""
    if m < 0 or k < 2:
        raise InvalidParameterError("need m >= 0 and k >= 2")
    grid = np.asarray(sample_grid, dtype=np.float64)
    count = (k - 1) * m
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(derive_seed(seed, 0)) + idx * np.uint64(GOLDEN)
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    u = ((z >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53
    lifetimes = np.sort(-np.log(u) * ((k - 1) / k))
    alive = count - np.searchsorted(lifetimes, grid, side="right")
    return [(float(t), int(p)) for t, p in zip(grid, alive)]


@dataclass(frozen=True)
class LightHeavyProfile:
    """Empirical light/heavy profile of a trajectory around a split time."""

    t0: float
    min_light_before: int  # min L over samples with t <= t0
    reached_t0: bool  # tau >= t0
    heavy_bounded_after: bool  # H <= B/(2k) at every sample in [t0, tau]
    max_heavy_ratio_after: float  # max H/B over those samples (0 if none)


def light_heavy_profile(traj: PeelTrajectory, t0: float, k: int) -> LightHeavyProfile:
    """Check the two-phase picture: plenty of light balls up to ``t0``, then
    heavy balls at most a 1/(2k) fraction of survivors."""
    before = traj.times <= t0
    min_light = int(traj.light[before].min()) if before.any() else 0
    after = (traj.times >= t0) & (traj.times <= traj.tau) & (traj.balls > 0)
    if after.any():
        ratios = traj.heavy[after] / traj.balls[after]
        max_ratio = float(ratios.max())
    else:
        max_ratio = 0.0
    return LightHeavyProfile(
        t0=t0,
        min_light_before=min_light,
        reached_t0=traj.tau >= t0,
        heavy_bounded_after=max_ratio <= 1.0 / (2 * k),
        max_heavy_ratio_after=max_ratio,
    )


def smallest_heavy_bounded_t0(traj: PeelTrajectory, k: int) -> float:
    """Smallest sampled time from which heavy <= balls/(2k) holds through
    the stopping time; 0.0 when it holds everywhere, inf when it fails even
    at the last sample."""
    in_range = (traj.times <= traj.tau) & (traj.balls > 0)
    bad = in_range & (2 * k * traj.heavy > traj.balls)
    if not bad.any():
        return 0.0
    last_bad = np.flatnonzero(bad)[-1]
    later = traj.times[last_bad + 1 :]
    return float(later[0]) if len(later) else math.inf


def heavy_balls_vanished(traj: PeelTrajectory, m: int) -> bool:
    """True iff no sample at or past (3/5)*ln(m) shows a heavy ball."""
    if m <= 0:
        return True
    cutoff = 0.6 * math.log(m)
    late = traj.times >= cutoff
    return bool(np.all(traj.heavy[late] == 0))
