"""The random eviction process and its target-orientation variant.

Each round an eligible edge is chosen by a scheduling policy, oriented to a
uniformly random incident vertex, and any edge previously oriented there is
evicted.  The plain process treats unoriented edges as eligible and stops
when everything is oriented; the targeted variant treats every edge with
``f(e) != F(e)`` as eligible and stops only at ``f == F``.  Policies are
oblivious: they see the past state, never future random choices.

Built-in policies:

* ``fifo``: queue; evicted edges rejoin at the tail.
* ``lifo``: stack popping lower initial indices first, evicted edges on
  top; this is exactly the sequential-insertion schedule, so with shared
  per-edge substreams a run reproduces sequential random-walk bulk
  insertion round for round.
* ``random``: uniform over the eligible set.
* ``max-peel``: adversarial; picks the eligible edge with the largest
  precomputed peeling number, ties by index.
* ``rr``: round robin over edge indices, modelling an arbitrary
  interleaving of one logical insertion thread per key.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ._backend import kernels
from ._core_py import (
    IOLD_ALL_COPIES,
    IOLD_OFF,
    POLICY_FIFO,
    POLICY_LIFO,
    POLICY_MAX_PEEL,
    POLICY_RANDOM,
    POLICY_ROUND_ROBIN,
)
from .errors import InvalidParameterError
from .hypergraph import Hypergraph
from .peeling import Peeling, is_valid_partial_orientation, peel, peeling_numbers
from .rng import derive_seed

__all__ = [
    "Policy",
    "POLICIES",
    "MoveTrace",
    "EvictionRun",
    "MoveBoundEstimate",
    "default_round_cap",
    "run_rep",
    "run_rep_prime",
    "run_parallel_insertion_sim",
    "estimate_move_bound",
]

_POLICY_IDS = {
    "fifo": POLICY_FIFO,
    "lifo": POLICY_LIFO,
    "random": POLICY_RANDOM,
    "max-peel": POLICY_MAX_PEEL,
    "rr": POLICY_ROUND_ROBIN,
}

POLICIES = tuple(_POLICY_IDS)


@dataclass(frozen=True)
class Policy:
    """A named schedule for choosing the next eligible edge."""

    name: str

    def __post_init__(self):
        if self.name not in _POLICY_IDS:
            raise InvalidParameterError(
                f"unknown policy {self.name!r}; expected one of {POLICIES}"
            )

    @property
    def id(self) -> int:
        return _POLICY_IDS[self.name]


def _as_policy(policy: Union[Policy, str]) -> Policy:
    return policy if isinstance(policy, Policy) else Policy(policy)


@dataclass(frozen=True)
class MoveTrace:
    rounds: int
    moves: np.ndarray  # int64[m], selections per edge; sums to rounds
    done: bool

    @property
    def status(self) -> str:
        return "done" if self.done else "cap-exceeded"


@dataclass(frozen=True)
class EvictionRun:
    trace: MoveTrace
    orientation: np.ndarray  # final f, -1 for unoriented
    thread_work: np.ndarray  # rounds charged to each logical insertion thread


@dataclass(frozen=True)
class MoveBoundEstimate:
    edge: int
    observed_mean_moves: float  # empirical E[moves(e)]
    bound: float  # k + multiplicity-weighted sum of dependency means


def default_round_cap(m: int, k: int) -> int:
    return 200 * k * max(m, 1)


def _maxpeel_key(H: Hypergraph, target, seed: int) -> np.ndarray:
    """Peeling numbers used by the max-peel adversary: from the target
    orientation when one is given, else from a fresh random peeling."""
    if target is not None:
        peeling = target
    else:
        peeling = peel(H, seed=derive_seed(seed, 0), randomize=True)
        if not isinstance(peeling, Peeling):
            raise InvalidParameterError(
                "max-peel policy needs a peelable hypergraph"
            )
    return peeling_numbers(H, peeling).edge_peel


def _run(
    H: Hypergraph,
    policy: Union[Policy, str],
    seed: int,
    cap: int | None,
    use_iold: bool,
    target: Peeling | None,
) -> EvictionRun:
    pol = _as_policy(policy)
    cap = default_round_cap(H.m, H.k) if cap is None else cap
    peel_key = None
    if pol.id == POLICY_MAX_PEEL:
        peel_key = _maxpeel_key(H, target, seed)
    target_arr = target.orientation if target is not None else None
    iold = IOLD_ALL_COPIES if use_iold else IOLD_OFF
    moves, rounds, done, f, work = kernels.rep_kernel(
        H.n, H.k, H.flat(), seed, pol.id, target_arr, cap, iold, peel_key
    )
    return EvictionRun(
        trace=MoveTrace(rounds=rounds, moves=moves, done=done),
        orientation=f,
        thread_work=work,
    )


def run_rep(
    H: Hypergraph,
    policy: Union[Policy, str],
    seed: int,
    cap: int | None = None,
    use_iold: bool = False,
) -> EvictionRun:
    """Run the eviction process until every edge is oriented (or the round
    cap is hit).  ``use_iold`` enables the no-immediate-return exclusion for
    sensitivity runs; the plain process leaves it off."""
    return _run(H, policy, seed, cap, use_iold, target=None)


def run_rep_prime(
    H: Hypergraph,
    target: Peeling,
    policy: Union[Policy, str],
    seed: int,
    cap: int | None = None,
) -> EvictionRun:
    """Run the targeted eviction process until ``f`` equals ``target``
    exactly (or the round cap is hit).

    No last-evicted-bucket exclusion here: an edge barred from re-entering
    its target bucket until some other edge evicts it can leave the target
    orientation unreachable, so the exclusion switch applies to the plain
    process only.
    """
    if len(target.orientation) != H.m:
        raise InvalidParameterError("target orientation size mismatch")
    if not is_valid_partial_orientation(H, target.orientation) or bool(
        np.any(target.orientation < 0)
    ):
        raise InvalidParameterError("target is not a total valid orientation")
    return _run(H, policy, seed, cap, use_iold=False, target=target)


def run_parallel_insertion_sim(
    H: Hypergraph,
    schedule: Union[Policy, str],
    seed: int,
    cap: int | None = None,
) -> EvictionRun:
    """Deterministic simulation of m insertion threads with atomic swaps.

    The scheduler's pick of a runnable thread is exactly a pick of an
    unplaced key, so this is the plain eviction process under ``schedule``;
    ``thread_work`` reports how many rounds each logical thread executed
    (an eviction hands the evictee to the evictor's thread, as in a
    random-walk chain).
    """
    return _run(H, schedule, seed, cap, use_iold=False, target=None)


def estimate_move_bound(
    H: Hypergraph,
    target: Peeling,
    edges: Union[int, Sequence[int]],
    seed: int,
    trials: int,
    policy: Union[Policy, str] = "random",
) -> list[MoveBoundEstimate]:
    """Estimate, from repeated targeted-eviction runs, each queried edge's
    expected move count against ``k`` plus the multiplicity-weighted mean
    moves of the edges it directly depends on.

    All queried edges share one batch of ``trials`` runs (run ``i`` uses
    ``derive_seed(seed, i)``).
    """
    if isinstance(edges, (int, np.integer)):
        edges = [int(edges)]
    mean_moves = np.zeros(H.m, dtype=np.float64)
    for i in range(trials):
        run = run_rep_prime(H, target, policy, derive_seed(seed, i))
        if not run.trace.done:
            raise RuntimeError("targeted eviction run hit the round cap")
        mean_moves += run.trace.moves
    mean_moves /= trials

    orient = target.orientation
    incidences = H.incidences
    out = []
    for e in edges:
        v = int(orient[e])
        bound = float(H.k)
        for e2 in range(H.m):
            if e2 == e:
                continue
            mult = int(np.count_nonzero(incidences[e2] == v))
            if mult:
                bound += mult * float(mean_moves[e2])
        out.append(
            MoveBoundEstimate(
                edge=int(e),
                observed_mean_moves=float(mean_moves[e]),
                bound=bound,
            )
        )
    return out
