"""Random k-uniform multiset hypergraphs.

A hypergraph stands for a set of keys in a table with ``n`` buckets: edge
``e`` lists the k bucket choices of key ``e``.  Incidences are multisets
(an edge may hit the same vertex more than once) and the edge list may
contain duplicate edges; both occur with the natural probability under
uniform sampling and are kept.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from .errors import InvalidParameterError

__all__ = [
    "Hypergraph",
    "sample_hypergraph",
    "from_explicit",
    "degree_sequence",
    "to_json_dict",
    "from_json_dict",
]


@dataclass(frozen=True)
class Hypergraph:
    """Immutable k-uniform multiset hypergraph.

    ``incidences`` has shape ``(m, k)``; row ``e`` holds edge ``e``'s vertex
    choices in generation order (the order carries no meaning).  ``seed`` is
    the sampling seed, 0 for explicitly constructed instances.
    """

    n: int
    k: int
    incidences: np.ndarray = field(repr=False)
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidParameterError("vertex count n must be >= 1")
        if self.k < 2:
            raise InvalidParameterError("uniformity k must be >= 2")
        inc = np.ascontiguousarray(self.incidences, dtype=np.uint32)
        if inc.ndim != 2 or (inc.shape[0] > 0 and inc.shape[1] != self.k):
            raise InvalidParameterError("incidences must have shape (m, k)")
        if inc.shape[0] == 0:
            inc = inc.reshape(0, self.k)
        elif int(inc.max()) >= self.n:
            raise InvalidParameterError("vertex index out of range")
        inc.setflags(write=False)
        object.__setattr__(self, "incidences", inc)

    @property
    def m(self) -> int:
        return self.incidences.shape[0]

    def edge(self, e: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.incidences[e])

    def edges(self) -> list[tuple[int, ...]]:
        return [self.edge(e) for e in range(self.m)]

    def flat(self) -> np.ndarray:
        """Incidences flattened to shape (m*k,), as consumed by kernels."""
        return self.incidences.reshape(-1)

    def degree_sequence(self) -> np.ndarray:
        return degree_sequence(self)


def sample_hypergraph(n: int, m: int, k: int, seed: int) -> Hypergraph:
    """Sample ``m`` edges whose ``k*m`` incidences are i.i.d. uniform on
    ``[0, n)``, drawn deterministically from ``stream(seed)``."""
    if n < 1:
        raise InvalidParameterError("vertex count n must be >= 1")
    if k < 2:
        raise InvalidParameterError("uniformity k must be >= 2")
    if m < 0:
        raise InvalidParameterError("edge count m must be >= 0")
    inc = kernels.sample_uniform(seed, k * m, n).reshape(m, k)
    return Hypergraph(n=n, k=k, incidences=inc, seed=seed)


def from_explicit(
    n: int, k: int, edges: Iterable[Sequence[int]], seed: int = 0
) -> Hypergraph:
    """Build a hypergraph from explicit edges (for tests and file loading)."""
    rows = [tuple(edge) for edge in edges]
    for row in rows:
        if len(row) != k:
            raise InvalidParameterError(
                f"edge {row} has {len(row)} incidences, expected k={k}"
            )
        for v in row:
            if not 0 <= int(v) < n:
                raise InvalidParameterError(f"vertex index {v} not in [0, {n})")
    inc = np.array(rows, dtype=np.uint32).reshape(len(rows), k)
    return Hypergraph(n=n, k=k, incidences=inc, seed=seed)


def degree_sequence(H: Hypergraph) -> np.ndarray:
    """Per-vertex incidence multiplicities; sums to k*m."""
    return np.bincount(H.flat(), minlength=H.n).astype(np.int64)


def to_json_dict(H: Hypergraph) -> dict:
    return {
        "n": H.n,
        "k": H.k,
        "seed": H.seed,
        "edges": [list(edge) for edge in H.edges()],
    }


def from_json_dict(doc: dict) -> Hypergraph:
    return from_explicit(
        int(doc["n"]), int(doc["k"]), doc["edges"], seed=int(doc.get("seed", 0))
    )
