"""Greedy peeling, 2-cores, dependence graphs and peeling numbers.

Peeling repeatedly orients the unique edge at a degree-1 vertex to that
vertex and deletes the edge.  When everything peels, the result is an
injective orientation together with the peel order; otherwise the remainder
is the 2-core.  On top of a peeling this module computes the direct
dependence structure, per-edge peeling numbers, and path counts in the
vertex-based dependence graph, each with an independent brute-force oracle
for small instances.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from ._backend import kernels
from .errors import InstanceTooLargeError, InvalidParameterError
from .hypergraph import Hypergraph

__all__ = [
    "Peeling",
    "TwoCore",
    "PeelReport",
    "PathCount",
    "VertexDependenceGraph",
    "peel",
    "two_core",
    "direct_dependents",
    "build_vertex_dependence_graph",
    "peeling_numbers",
    "vertex_peeling_numbers",
    "count_paths",
    "brute_force_path_count",
    "is_valid_peeling",
    "is_valid_partial_orientation",
]

U64_MAX = (1 << 64) - 1


@dataclass(frozen=True)
class Peeling:
    """Total injective orientation plus the order in which edges peeled."""

    orientation: np.ndarray  # int64[m], vertex assigned to each edge
    order: np.ndarray  # int64[m], edge ids in peel order

    @property
    def m(self) -> int:
        return len(self.orientation)


@dataclass(frozen=True)
class TwoCore:
    """Maximal remainder of exhaustive peeling."""

    edges: np.ndarray  # int64, surviving edge ids (ascending)
    degrees: np.ndarray  # int64[n], vertex degrees within the core

    @property
    def empty(self) -> bool:
        return len(self.edges) == 0


@dataclass(frozen=True)
class PeelReport:
    """Peeling numbers and path counts for a peeled hypergraph."""

    edge_peel: np.ndarray  # uint64[m], saturating
    ending_paths: np.ndarray  # uint64[n], paths ending at v incl. the trivial one
    total_peel: int  # exact sum of the (saturated) per-edge values
    overflow: bool


@dataclass(frozen=True)
class PathCount:
    count: int
    overflow: bool


@dataclass
class VertexDependenceGraph:
    """Directed multigraph on vertices: (v, v') with the multiplicity of v in
    the edge oriented to v'.  Acyclic for any valid peeling."""

    n: int
    multiplicity: dict = field(default_factory=dict)  # (src, dst) -> count

    def in_edges(self, v: int) -> list[tuple[int, int]]:
        return [(src, mult) for (src, dst), mult in self.multiplicity.items() if dst == v]


def _as_orientation(F: Union[Peeling, np.ndarray]) -> np.ndarray:
    arr = F.orientation if isinstance(F, Peeling) else np.asarray(F, dtype=np.int64)
    return arr


def peel(
    H: Hypergraph, seed: int = 0, randomize: bool = False
) -> Union[Peeling, TwoCore]:
    """Exhaustively peel ``H``.

    Degree-1 vertices are selected lowest-index-first, or uniformly at
    random from the current pool when ``randomize`` is set (a "random
    peeling").  Returns a ``Peeling`` when every edge peels and the
    ``TwoCore`` remainder otherwise.  Deterministic given the inputs.
    """
    orient, order, npeeled = kernels.peel_kernel(
        H.n, H.k, H.flat(), seed, bool(randomize)
    )
    if npeeled == H.m:
        return Peeling(orientation=orient, order=order)
    return _core_from_orientation(H, orient)


def _core_from_orientation(H: Hypergraph, orient: np.ndarray) -> TwoCore:
    surviving = np.flatnonzero(orient < 0).astype(np.int64)
    if len(surviving):
        deg = np.bincount(
            H.incidences[surviving].reshape(-1), minlength=H.n
        ).astype(np.int64)
    else:
        deg = np.zeros(H.n, dtype=np.int64)
    return TwoCore(edges=surviving, degrees=deg)


def two_core(H: Hypergraph) -> TwoCore:
    """The 2-core of ``H`` (empty exactly when ``H`` is peelable).  The edge
    set is invariant under the peel order."""
    orient, _, _ = kernels.peel_kernel(H.n, H.k, H.flat(), 0, False)
    return _core_from_orientation(H, orient)


def direct_dependents(
    H: Hypergraph, F: Union[Peeling, np.ndarray], e: int
) -> Counter:
    """The multiset D(e): every other edge e' with multiplicity equal to the
    number of copies of F(e) in e'.  Only these edges can evict e from its
    assigned bucket.  e itself is never included."""
    orient = _as_orientation(F)
    v = int(orient[e])
    out: Counter = Counter()
    for e2 in range(H.m):
        if e2 == e:
            continue
        mult = int(np.count_nonzero(H.incidences[e2] == v))
        if mult:
            out[e2] = mult
    return out


def build_vertex_dependence_graph(
    H: Hypergraph, F: Union[Peeling, np.ndarray]
) -> VertexDependenceGraph:
    """Vertex-based dependence graph: for each edge e' oriented to v', an arc
    (v, v') per copy of each v != v' in e'.  Copies of v' itself contribute
    no self-loop."""
    orient = _as_orientation(F)
    g = VertexDependenceGraph(n=H.n)
    mult = g.multiplicity
    for e in range(H.m):
        vp = int(orient[e])
        for v in H.incidences[e]:
            v = int(v)
            if v == vp:
                continue
            key = (v, vp)
            mult[key] = mult.get(key, 0) + 1
    return g


def peeling_numbers(H: Hypergraph, peeling: Peeling) -> PeelReport:
    """Peeling numbers of every edge plus per-vertex ending-path counts.

    ``edge_peel[e]`` satisfies the recursion ``sum over D(e) of (1 + peel)``
    evaluated in peel order; it equals the number of non-trivial paths
    starting at F(e) in the vertex-based dependence graph.  Counters
    saturate at 2**64-1 with a sticky ``overflow`` flag.
    """
    edge_peel, ending, overflow = kernels.dependence_stats(
        H.n, H.k, H.flat(), peeling.orientation, peeling.order
    )
    total = int(sum(int(x) for x in edge_peel))
    return PeelReport(
        edge_peel=edge_peel, ending_paths=ending, total_peel=total, overflow=overflow
    )


def vertex_peeling_numbers(H: Hypergraph, peeling: Peeling) -> np.ndarray:
    """Number of non-trivial paths starting at each vertex of the dependence
    graph, computed directly on the vertex graph (independent of the
    edge-level recursion, for cross-checking).  Saturating."""
    orient = peeling.orientation.tolist()
    order = peeling.order.tolist()
    inc = H.flat().tolist()
    k = H.k
    indptr = [0] * (H.n + 1)
    for v in inc:
        indptr[v + 1] += 1
    for v in range(H.n):
        indptr[v + 1] += indptr[v]
    cursor = indptr[:-1].copy()
    adj = [0] * len(inc)
    for e in range(H.m):
        for j in range(e * k, e * k + k):
            v = inc[j]
            adj[cursor[v]] = e
            cursor[v] += 1

    vp = [0] * H.n
    own_edge = [-1] * H.n
    for e in range(H.m):
        own_edge[orient[e]] = e

    def paths_from(v: int) -> int:
        # out-arcs of v target F(e'') for every e'' containing v, except v's
        # own edge; all those targets were finalized earlier in peel order
        s = 0
        for t in range(indptr[v], indptr[v + 1]):
            e2 = adj[t]
            if e2 == own_edge[v]:
                continue
            s += 1 + vp[orient[e2]]
        return min(s, U64_MAX)

    for e in order:
        v = orient[e]
        vp[v] = paths_from(v)
    for v in range(H.n):
        if own_edge[v] < 0:
            vp[v] = paths_from(v)
    return np.array(vp, dtype=np.uint64)


def count_paths(H: Hypergraph, peeling: Peeling, v_end: int) -> PathCount:
    """Number of paths of the vertex-based dependence graph ending at
    ``v_end``, including the trivial path, by the peel-order propagation
    scheme.  Saturating 64-bit arithmetic with an overflow flag."""
    if not 0 <= v_end < H.n:
        raise InvalidParameterError("v_end out of range")
    inc = H.flat().tolist()
    orient = peeling.orientation.tolist()
    k = H.k
    p = [0] * H.n
    p[v_end] = 1
    overflow = False
    for e in peeling.order.tolist():
        vp = orient[e]
        val = p[vp]
        if val:
            for j in range(e * k, e * k + k):
                w = inc[j]
                if w == vp:
                    continue
                s = p[w] + val
                if s > U64_MAX:
                    s = U64_MAX
                    overflow = True
                p[w] = s
    total = sum(p)
    if total > U64_MAX:
        total = U64_MAX
        overflow = True
    return PathCount(count=total, overflow=overflow)


def brute_force_path_count(
    G: VertexDependenceGraph, v_end: int, budget: int = 1_000_000
) -> int:
    """Exhaustive DFS enumeration of the paths ending at ``v_end``.

    Walks arcs backwards from ``v_end``; every visit (including the start)
    is one path, and parallel arcs are walked once per copy.  Raises
    ``InstanceTooLargeError`` once more than ``budget`` paths are counted.
    Intended as a test oracle for ``count_paths`` on small acyclic graphs.
    """
    back: dict[int, list[tuple[int, int]]] = {}
    for (src, dst), mult in G.multiplicity.items():
        back.setdefault(dst, []).append((src, mult))

    count = 0
    stack = [v_end]
    while stack:
        v = stack.pop()
        count += 1
        if count > budget:
            raise InstanceTooLargeError(
                f"more than {budget} paths ending at vertex {v_end}"
            )
        for src, mult in back.get(v, ()):
            stack.extend([src] * mult)
    return count


def is_valid_partial_orientation(H: Hypergraph, f: np.ndarray) -> bool:
    """f maps each edge to one of its own incidences or -1, injectively off
    -1."""
    seen: set[int] = set()
    for e in range(H.m):
        v = int(f[e])
        if v < 0:
            continue
        if v not in H.incidences[e]:
            return False
        if v in seen:
            return False
        seen.add(v)
    return True


def is_valid_peeling(H: Hypergraph, peeling: Peeling) -> bool:
    """Total injective orientation whose order is a legal peeling run: when
    an edge is peeled, its assigned vertex has degree 1 in the remainder
    (equivalently every member of D(e) precedes e in the order)."""
    if peeling.m != H.m:
        return False
    order = peeling.order.tolist()
    if sorted(order) != list(range(H.m)):
        return False
    orient = peeling.orientation.tolist()
    inc = H.flat().tolist()
    k = H.k
    seen: set[int] = set()
    for e in range(H.m):
        v = orient[e]
        if v < 0 or v in seen:
            return False
        seen.add(v)
        base = e * k
        if sum(1 for j in range(base, base + k) if inc[j] == v) != 1:
            return False
    position = [0] * H.m
    for i, e in enumerate(order):
        position[e] = i
    # e must be peeled after every other edge containing its vertex, i.e. it
    # holds the strictly largest peel position among them
    last_pos = [-1] * H.n
    last_edge = [-1] * H.n
    for e in range(H.m):
        base = e * k
        for j in range(base, base + k):
            v = inc[j]
            if position[e] > last_pos[v]:
                last_pos[v] = position[e]
                last_edge[v] = e
    return all(last_edge[orient[e]] == e for e in range(H.m))
