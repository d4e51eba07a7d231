"""k-ary cuckoo hash table (bucket size 1) with random-walk insertion.

Keys are opaque ids attached to their k bucket choices; no user data is
hashed.  An insertion repeatedly places the current key into a uniformly
random admissible bucket, evicting any occupant, which then continues the
chain.  With ``use_iold`` (the default) an evicted key never moves straight
back into the bucket it was just evicted from; by default the exclusion
drops every copy of that bucket among the key's choices and falls back to
all k choices if nothing remains (``iold_single_copy`` switches to dropping
one copy, for sensitivity runs).

Every key's random choices come from its own substream
(``derive_seed(table_seed, key_id)``), the same layout as the eviction
process kernels, so scheduling-equivalent processes consume identical
randomness per key.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from ._core_py import (
    IOLD_ALL_COPIES,
    IOLD_OFF,
    IOLD_SINGLE_COPY,
    _draw_vertex,
)
from .errors import DuplicateKeyError, InvalidParameterError
from .hypergraph import sample_hypergraph
from .rng import derive_seed

__all__ = [
    "CuckooTable",
    "InsertOutcome",
    "BulkTrialResult",
    "BulkInsertSummary",
    "default_move_cap",
    "bulk_insert_experiment",
]


def default_move_cap(n: int, k: int) -> int:
    """Per-insertion iteration budget: generous below the load threshold,
    finite above it."""
    return 100 * k * math.ceil(math.log2(n + 2))


@dataclass(frozen=True)
class InsertOutcome:
    placed: bool
    moves: int  # loop iterations of this insertion, evicted keys included

    @property
    def status(self) -> str:
        return "placed" if self.placed else "cap-exceeded"


class CuckooTable:
    """A table of ``n`` buckets holding at most one key each."""

    def __init__(
        self,
        n: int,
        k: int,
        seed: int,
        use_iold: bool = True,
        move_cap: int | None = None,
        iold_single_copy: bool = False,
        validate: bool = False,
    ):
        if n < 1:
            raise InvalidParameterError("bucket count n must be >= 1")
        if k < 2:
            raise InvalidParameterError("choice count k must be >= 2")
        self.n = n
        self.k = k
        self.seed = seed
        self.move_cap = default_move_cap(n, k) if move_cap is None else move_cap
        if not use_iold:
            self._iold_mode = IOLD_OFF
        else:
            self._iold_mode = IOLD_SINGLE_COPY if iold_single_copy else IOLD_ALL_COPIES
        self._validate = validate
        self._occupant = [-1] * n  # bucket -> key id
        self._position = []  # key id -> bucket or -1
        self._incidences: list[tuple[int, ...]] = []  # key id -> choices
        self._inc_flat: list[int] = []
        self._key_of: dict[tuple[int, ...], int] = {}
        self._moves: list[int] = []  # per-key move counters
        self._last_evicted_from: list[int] = []
        self._stream: list[int] = []

    @property
    def occupied(self) -> int:
        return sum(1 for p in self._position if p >= 0)

    def moves_of(self, key_id: int) -> int:
        return self._moves[key_id]

    def occupant_array(self) -> np.ndarray:
        return np.array(self._occupant, dtype=np.int64)

    def _register(self, incidences) -> int:
        row = tuple(int(v) for v in incidences)
        if len(row) != self.k:
            raise InvalidParameterError(f"expected {self.k} bucket choices")
        for v in row:
            if not 0 <= v < self.n:
                raise InvalidParameterError(f"bucket index {v} not in [0, {self.n})")
        if row in self._key_of:
            raise DuplicateKeyError(f"key with choices {row} already inserted")
        key_id = len(self._incidences)
        self._key_of[row] = key_id
        self._incidences.append(row)
        self._inc_flat.extend(row)
        self._position.append(-1)
        self._moves.append(0)
        self._last_evicted_from.append(-1)
        self._stream.append(derive_seed(self.seed, key_id))
        return key_id

    def insert(self, incidences) -> InsertOutcome:
        """Random-walk insert of a new key; its choices identify it.

        On a cap-exceeded abort nothing is rolled back: the placement stays
        a valid partial assignment with exactly one key (the last evictee)
        left unplaced.
        """
        key_id = self._register(incidences)
        cur = key_id
        iters = 0
        k = self.k
        occupant = self._occupant
        position = self._position
        while iters < self.move_cap:
            ex = self._last_evicted_from[cur] if self._iold_mode != IOLD_OFF else -1
            v = _draw_vertex(self._inc_flat, self._stream, cur, k, ex, self._iold_mode)
            iters += 1
            self._moves[cur] += 1
            prev = occupant[v]
            occupant[v] = cur
            position[cur] = v
            if prev < 0:
                if self._validate:
                    self._check_state()
                return InsertOutcome(placed=True, moves=iters)
            position[prev] = -1
            self._last_evicted_from[prev] = v
            cur = prev
            if self._validate:
                self._check_state()
        return InsertOutcome(placed=False, moves=iters)

    def contains(self, incidences) -> bool:
        """True iff this key currently occupies one of its buckets."""
        row = tuple(int(v) for v in incidences)
        key_id = self._key_of.get(row)
        return key_id is not None and self._position[key_id] >= 0

    def _check_state(self) -> None:
        # bucket -> key and key -> bucket views must mirror each other and
        # every placement must be one of the key's own choices
        placed = 0
        for b, key in enumerate(self._occupant):
            if key < 0:
                continue
            placed += 1
            assert self._position[key] == b
            assert b in self._incidences[key]
        assert placed == self.occupied


@dataclass(frozen=True)
class BulkTrialResult:
    trial: int
    seed: int
    keys: int
    total_moves: int
    mean_moves: float
    max_moves: int  # largest per-key move counter
    max_insert_moves: int  # longest single insertion
    failures: int  # insertions that hit the cap


@dataclass(frozen=True)
class BulkInsertSummary:
    n: int
    k: int
    load: float
    seed: int
    use_iold: bool
    move_cap: int
    trials: list[BulkTrialResult]

    @property
    def mean_moves(self) -> float:
        return float(np.mean([t.mean_moves for t in self.trials]))

    @property
    def total_failures(self) -> int:
        return sum(t.failures for t in self.trials)


def bulk_insert_experiment(
    n: int,
    k: int,
    load: float,
    seed: int,
    use_iold: bool = True,
    trials: int = 1,
    move_cap: int | None = None,
    iold_single_copy: bool = False,
) -> BulkInsertSummary:
    """Insert ``floor(load*n)`` sampled keys sequentially, ``trials`` times.

    Trial ``t`` uses key set ``sample_hypergraph(n, m, k, derive_seed(seed,
    t))`` and the same derived seed for the insertion randomness.  Duplicate
    sampled keys are allowed here (the key set is a multiset, exactly like
    the edge multiset of the hypergraph model); cap-exceeded insertions
    count as failures and the run continues with the next key.
    """
    if not 0 <= load < 1 or n < 1 or k < 2:
        raise InvalidParameterError("need n >= 1, k >= 2 and load in [0, 1)")
    cap = default_move_cap(n, k) if move_cap is None else move_cap
    if not use_iold:
        mode = IOLD_OFF
    else:
        mode = IOLD_SINGLE_COPY if iold_single_copy else IOLD_ALL_COPIES
    m = int(load * n)
    out = []
    for t in range(trials):
        trial_seed = derive_seed(seed, t)
        H = sample_hypergraph(n, m, k, trial_seed)
        key_moves, insert_iters, insert_capped, _, _ = kernels.bulk_insert_kernel(
            n, k, H.flat(), trial_seed, mode, cap
        )
        total = int(insert_iters.sum())
        out.append(
            BulkTrialResult(
                trial=t,
                seed=trial_seed,
                keys=m,
                total_moves=total,
                mean_moves=total / m if m else 0.0,
                max_moves=int(key_moves.max()) if m else 0,
                max_insert_moves=int(insert_iters.max()) if m else 0,
                failures=int(insert_capped.sum()),
            )
        )
    return BulkInsertSummary(
        n=n,
        k=k,
        load=load,
        seed=seed,
        use_iold=use_iold,
        move_cap=cap,
        trials=out,
    )
