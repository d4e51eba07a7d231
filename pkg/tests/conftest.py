import numpy as np
import pytest

from cuckoopeel import Peeling, peel, sample_hypergraph
from cuckoopeel.rng import derive_seed


def make_peelable_instances(count, seed, n_range=(4, 30), max_m=20, k=3):
    """Deterministic battery of small peelable instances with random
    peelings; non-peelable candidates are skipped."""
    out = []
    cand = 0
    lo, hi = n_range
    while len(out) < count:
        s = derive_seed(seed, cand)
        cand += 1
        n = lo + derive_seed(s, 0) % (hi - lo + 1)
        m = min(max_m, 1 + derive_seed(s, 1) % max(1, (7 * n) // 10))
        H = sample_hypergraph(n, m, k, derive_seed(s, 2))
        peeling = peel(H, seed=derive_seed(s, 3), randomize=True)
        if isinstance(peeling, Peeling):
            out.append((H, peeling))
    return out


@pytest.fixture(scope="session")
def small_instances():
    return make_peelable_instances(60, seed=424242)


def edge_dependence_graph(H, orientation):
    """Edge-based dependence multigraph as {(e, e'): multiplicity}; an arc
    (e, e') means e' holds a copy of e's assigned vertex."""
    arcs = {}
    for e in range(H.m):
        v = int(orientation[e])
        for e2 in range(H.m):
            if e2 == e:
                continue
            mult = int(np.count_nonzero(H.incidences[e2] == v))
            if mult:
                arcs[(e, e2)] = mult
    return arcs


def count_nontrivial_paths_from(arcs, start):
    """DFS enumeration of non-trivial directed paths leaving ``start``,
    counting parallel arcs separately.  Exact (python ints)."""
    out = {}
    for (a, b), mult in arcs.items():
        out.setdefault(a, []).append((b, mult))
    total = 0
    stack = [(start, 0)]
    while stack:
        node, depth = stack.pop()
        if depth > 0:
            total += 1
        for nxt, mult in out.get(node, ()):
            stack.extend([(nxt, depth + 1)] * mult)
    return total
