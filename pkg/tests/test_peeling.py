from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import count_nontrivial_paths_from, edge_dependence_graph
from cuckoopeel import (
    InstanceTooLargeError,
    Peeling,
    TwoCore,
    VertexDependenceGraph,
    brute_force_path_count,
    build_vertex_dependence_graph,
    count_paths,
    direct_dependents,
    from_explicit,
    is_valid_peeling,
    peel,
    peeling_numbers,
    sample_hypergraph,
    two_core,
    vertex_peeling_numbers,
)
from cuckoopeel.rng import derive_seed

U64_MAX = (1 << 64) - 1


def test_peel_empty():
    H = from_explicit(5, 3, [])
    result = peel(H)
    assert isinstance(result, Peeling)
    assert result.m == 0


def test_peel_two_overlapping_edges_always_succeeds():
    H = from_explicit(4, 3, [(0, 1, 2), (1, 2, 3)])
    for seed in range(200):
        result = peel(H, seed=seed, randomize=True)
        assert isinstance(result, Peeling)
        assert is_valid_peeling(H, result)
        # first pick is one of the two degree-1 vertices
        first = result.order[0]
        assert int(result.orientation[first]) in (0, 3)


def test_peel_deterministic_lowest_index():
    H = from_explicit(4, 3, [(0, 1, 2), (1, 2, 3)])
    result = peel(H)
    assert isinstance(result, Peeling)
    # vertex 0 is the lowest degree-1 vertex, so edge 0 peels first to it
    assert result.order.tolist() == [0, 1]
    assert int(result.orientation[0]) == 0
    assert int(result.orientation[1]) in (1, 2, 3)


def test_duplicated_edge_is_a_core():
    H = from_explicit(3, 3, [(0, 1, 2), (0, 1, 2)])
    result = peel(H, seed=1, randomize=True)
    assert isinstance(result, TwoCore)
    assert result.edges.tolist() == [0, 1]
    assert not result.empty
    assert two_core(H).edges.tolist() == [0, 1]


def test_two_core_of_peelable_is_empty():
    H = sample_hypergraph(200, 100, 3, seed=3)
    assert isinstance(peel(H), Peeling)
    assert two_core(H).empty


def test_two_core_degrees_are_at_least_two():
    # every vertex that still touches a surviving edge has degree >= 2
    found = 0
    for seed in range(30):
        H = sample_hypergraph(40, 38, 3, seed=derive_seed(555, seed))
        core = two_core(H)
        if core.empty:
            continue
        found += 1
        touched = core.degrees[core.degrees > 0]
        assert int(touched.min()) >= 2
        recount = np.bincount(
            H.incidences[core.edges].reshape(-1), minlength=H.n
        )
        assert np.array_equal(core.degrees, recount)
    assert found > 0


def test_vertex_peel_numbers_for_unassigned_vertices(small_instances):
    # vertices outside the orientation image still count their outgoing
    # paths; cross-check every vertex against DFS on the vertex graph
    for H, peeling in small_instances[:10]:
        G = build_vertex_dependence_graph(H, peeling)
        arcs = G.multiplicity
        vp = vertex_peeling_numbers(H, peeling)
        for v in range(H.n):
            out = {}
            for (a, b), mult in arcs.items():
                out.setdefault(a, []).append((b, mult))
            total = 0
            stack = [(v, 0)]
            while stack:
                node, depth = stack.pop()
                if depth > 0:
                    total += 1
                for nxt, mult in out.get(node, ()):
                    stack.extend([(nxt, depth + 1)] * mult)
            assert int(vp[v]) == total


def test_two_core_is_order_invariant():
    # the surviving edge set must not depend on the peel order
    for seed in range(10):
        H = sample_hypergraph(60, 55, 3, seed=derive_seed(77, seed))
        baseline = set(two_core(H).edges.tolist())
        for peel_seed in range(5):
            r = peel(H, seed=peel_seed, randomize=True)
            left = set() if isinstance(r, Peeling) else set(r.edges.tolist())
            assert left == baseline


def _naive_lowest_index_peel(H):
    """Recompute-from-scratch reference for deterministic peeling."""
    edges = [list(e) for e in H.edges()]
    alive = set(range(H.m))
    orient = [-1] * H.m
    order = []
    while True:
        deg = Counter()
        for e in alive:
            deg.update(edges[e])
        ones = sorted(v for v, d in deg.items() if d == 1)
        if not ones:
            break
        v = ones[0]
        e = next(e for e in alive if v in edges[e])
        orient[e] = v
        order.append(e)
        alive.remove(e)
    return orient, order, sorted(alive)


@settings(max_examples=30, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=25),
    m=st.integers(min_value=0, max_value=18),
    seed=st.integers(min_value=0, max_value=2**32),
)
def test_deterministic_peel_matches_naive(n, m, seed):
    H = sample_hypergraph(n, m, 3, seed)
    orient, order, core = _naive_lowest_index_peel(H)
    result = peel(H)
    if isinstance(result, Peeling):
        assert not core
        assert result.orientation.tolist() == orient
        assert result.order.tolist() == order
    else:
        assert result.edges.tolist() == core


@settings(max_examples=30, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=30),
    m=st.integers(min_value=0, max_value=20),
    k=st.integers(min_value=2, max_value=4),
    seed=st.integers(min_value=0, max_value=2**32),
)
def test_random_peel_is_valid_or_core(n, m, k, seed):
    H = sample_hypergraph(n, m, k, seed)
    result = peel(H, seed=seed ^ 1, randomize=True)
    if isinstance(result, Peeling):
        assert is_valid_peeling(H, result)
    else:
        assert len(result.edges) > 0


def test_direct_dependents_examples():
    H = from_explicit(4, 3, [(0, 1, 2), (1, 2, 3)])
    F = np.array([1, 3], dtype=np.int64)
    assert direct_dependents(H, F, 0) == Counter({1: 1})
    assert direct_dependents(H, F, 1) == Counter()
    # assigned vertex appearing nowhere else -> empty
    F2 = np.array([0, 3], dtype=np.int64)
    assert direct_dependents(H, F2, 0) == Counter()
    # duplicate copies double the multiplicity
    H2 = from_explicit(4, 3, [(0, 1, 2), (1, 1, 3)])
    assert direct_dependents(H2, np.array([1, 3], dtype=np.int64), 0) == Counter(
        {1: 2}
    )


def test_vertex_graph_examples():
    H0 = from_explicit(3, 3, [])
    assert build_vertex_dependence_graph(H0, np.zeros(0, dtype=np.int64)).multiplicity == {}

    H = from_explicit(4, 3, [(0, 1, 2), (1, 2, 3)])
    G = build_vertex_dependence_graph(H, np.array([1, 3], dtype=np.int64))
    assert G.multiplicity == {(0, 1): 1, (2, 1): 1, (1, 3): 1, (2, 3): 1}


def test_graph_homomorphism():
    # edge-level arc multiplicities map exactly onto vertex-level ones
    from conftest import make_peelable_instances

    battery = make_peelable_instances(100, seed=271828, n_range=(4, 50), max_m=35)
    for H, peeling in battery:
        arcs = edge_dependence_graph(H, peeling.orientation)
        G = build_vertex_dependence_graph(H, peeling)
        for (e, e2), mult in arcs.items():
            key = (int(peeling.orientation[e]), int(peeling.orientation[e2]))
            assert G.multiplicity.get(key) == mult


def test_peel_numbers_chain():
    # lowest-index peeling orients the chain 0 -> 2 -> 4, so edge 1 depends
    # on edge 0 and edge 2 depends on edge 1
    H = from_explicit(7, 3, [(0, 1, 2), (2, 3, 4), (4, 5, 6)])
    peeling = peel(H)
    assert isinstance(peeling, Peeling)
    assert peeling.orientation.tolist() == [0, 2, 4]
    assert direct_dependents(H, peeling.orientation, 0) == Counter()
    assert direct_dependents(H, peeling.orientation, 1) == Counter({0: 1})
    assert direct_dependents(H, peeling.orientation, 2) == Counter({1: 1})
    report = peeling_numbers(H, peeling)
    assert report.edge_peel.tolist() == [0, 1, 2]
    assert report.total_peel == 3


def test_peel_number_base_case(small_instances):
    for H, peeling in small_instances[:10]:
        report = peeling_numbers(H, peeling)
        for e in range(H.m):
            if not direct_dependents(H, peeling.orientation, e):
                assert int(report.edge_peel[e]) == 0


def test_peel_numbers_count_nontrivial_paths(small_instances):
    # independent oracle: DFS path enumeration on the edge-based graph
    for H, peeling in small_instances[:25]:
        arcs = edge_dependence_graph(H, peeling.orientation)
        report = peeling_numbers(H, peeling)
        for e in range(H.m):
            assert int(report.edge_peel[e]) == count_nontrivial_paths_from(arcs, e)


def test_edge_and_vertex_peel_numbers_agree(small_instances):
    for H, peeling in small_instances:
        report = peeling_numbers(H, peeling)
        vp = vertex_peeling_numbers(H, peeling)
        for e in range(H.m):
            assert int(report.edge_peel[e]) == int(vp[int(peeling.orientation[e])])


def test_count_paths_trivial_and_chain():
    H0 = from_explicit(3, 3, [])
    p0 = Peeling(
        orientation=np.zeros(0, dtype=np.int64), order=np.zeros(0, dtype=np.int64)
    )
    assert count_paths(H0, p0, 0).count == 1

    # vertex chain 0 -> 1 -> 2 built from explicit edges and orientation
    H = from_explicit(3, 2, [(0, 1), (1, 2)])
    peeling = Peeling(
        orientation=np.array([1, 2], dtype=np.int64),
        order=np.array([1, 0], dtype=np.int64),
    )
    assert is_valid_peeling(H, peeling)
    assert count_paths(H, peeling, 2).count == 3  # (2), (1,2), (0,1,2)
    assert count_paths(H, peeling, 1).count == 2
    assert count_paths(H, peeling, 0).count == 1


def test_brute_force_path_count_examples():
    G = VertexDependenceGraph(n=3, multiplicity={})
    assert brute_force_path_count(G, 0) == 1
    G2 = VertexDependenceGraph(n=2, multiplicity={(0, 1): 2})
    assert brute_force_path_count(G2, 1) == 3  # trivial plus two parallel arcs
    with pytest.raises(InstanceTooLargeError):
        brute_force_path_count(G2, 1, budget=2)


def test_count_paths_matches_brute_force(small_instances):
    for H, peeling in small_instances[:30]:
        G = build_vertex_dependence_graph(H, peeling)
        for v_end in range(H.n):
            fast = count_paths(H, peeling, v_end)
            assert not fast.overflow
            assert fast.count == brute_force_path_count(G, v_end)


def test_ending_path_inequality(small_instances):
    # total peel <= total ending paths - n
    for H, peeling in small_instances:
        report = peeling_numbers(H, peeling)
        assert not report.overflow
        rhs = sum(int(x) for x in report.ending_paths) - H.n
        assert report.total_peel <= rhs


def _doubling_chain(layers):
    """Each edge holds the next vertex twice, so peel numbers double every
    layer and overflow the 64-bit counters after ~64 layers."""
    edges = [(i, i + 1, i + 1) for i in range(layers)]
    H = from_explicit(layers + 1, 3, edges)
    peeling = peel(H)
    assert isinstance(peeling, Peeling)
    return H, peeling


def test_peel_numbers_saturate_with_flag():
    H, peeling = _doubling_chain(80)
    report = peeling_numbers(H, peeling)
    assert report.overflow
    assert int(report.edge_peel.max()) == U64_MAX
    small = peeling_numbers(*_doubling_chain(20))
    assert not small.overflow
    assert int(small.edge_peel.max()) == 2**20 - 2


def test_count_paths_saturates_with_flag():
    # dependence arcs point down the chain, so everything ends at vertex 0
    H, peeling = _doubling_chain(80)
    res = count_paths(H, peeling, 0)
    assert res.overflow
    assert res.count == U64_MAX
    small = count_paths(*_doubling_chain(20), 0)
    assert not small.overflow
    assert small.count == sum(2**i for i in range(21))


def test_is_valid_peeling_rejects_bad_witnesses():
    H = from_explicit(4, 3, [(0, 1, 2), (1, 2, 3)])
    good = peel(H)
    assert is_valid_peeling(H, good)
    # wrong order: dependency peeled after dependent
    bad_order = Peeling(orientation=good.orientation, order=good.order[::-1].copy())
    assert not is_valid_peeling(H, bad_order)
    # orientation to a vertex outside the edge
    bad_orient = Peeling(
        orientation=np.array([3, 0], dtype=np.int64), order=good.order
    )
    assert not is_valid_peeling(H, bad_orient)
