import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuckoopeel import (
    InvalidParameterError,
    degree_sequence,
    from_explicit,
    sample_hypergraph,
)
from cuckoopeel.hypergraph import from_json_dict, to_json_dict
from cuckoopeel.rng import derive_seed


def test_no_edges():
    H = sample_hypergraph(10, 0, 3, seed=42)
    assert H.m == 0
    assert degree_sequence(H).tolist() == [0] * 10


def test_single_vertex_forces_all_incidences():
    H = sample_hypergraph(1, 2, 3, seed=7)
    assert H.edges() == [(0, 0, 0), (0, 0, 0)]


def test_degree_sequence_counts_multiplicity():
    H = from_explicit(3, 3, [(0, 0, 1)])
    assert degree_sequence(H).tolist() == [2, 1, 0]


def test_degree_sequence_two_edges():
    H = from_explicit(4, 3, [(0, 1, 2), (1, 2, 3)])
    assert degree_sequence(H).tolist() == [1, 2, 2, 1]


def test_invalid_parameters():
    with pytest.raises(InvalidParameterError):
        sample_hypergraph(0, 5, 3, seed=1)
    with pytest.raises(InvalidParameterError):
        sample_hypergraph(10, 5, 1, seed=1)
    with pytest.raises(InvalidParameterError):
        from_explicit(2, 3, [(0, 1, 2)])  # index 2 >= n
    with pytest.raises(InvalidParameterError):
        from_explicit(4, 3, [(0, 1)])  # wrong arity


def test_sampling_is_bit_reproducible():
    a = sample_hypergraph(1000, 200, 3, seed=123)
    b = sample_hypergraph(1000, 200, 3, seed=123)
    c = sample_hypergraph(1000, 200, 3, seed=124)
    assert np.array_equal(a.incidences, b.incidences)
    assert not np.array_equal(a.incidences, c.incidences)


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=200),
    m=st.integers(min_value=0, max_value=100),
    k=st.integers(min_value=2, max_value=5),
    seed=st.integers(min_value=0, max_value=2**64 - 1),
)
def test_degree_conservation(n, m, k, seed):
    H = sample_hypergraph(n, m, k, seed)
    assert int(degree_sequence(H).sum()) == k * m
    assert H.incidences.shape == (m, k)
    if m:
        assert int(H.incidences.max()) < n


def test_mean_degree_matches_load():
    # mean vertex degree should be k*m/n = 2.25 within 0.15 averaged over seeds
    n, m, k = 1000, 750, 3
    means = [
        degree_sequence(sample_hypergraph(n, m, k, derive_seed(9, i))).mean()
        for i in range(100)
    ]
    assert abs(float(np.mean(means)) - 2.25) < 0.15


def test_single_vertex_degree_is_binomial():
    # degree of vertex 0 across many seeds fits Bin(k*m, 1/n)
    scipy_stats = pytest.importorskip("scipy.stats")
    n, m, k, reps = 100, 75, 3, 10_000
    km = k * m
    counts = np.zeros(km + 1, dtype=np.int64)
    for i in range(reps):
        H = sample_hypergraph(n, m, k, derive_seed(31337, i))
        counts[int(np.count_nonzero(H.flat() == 0))] += 1
    pmf = scipy_stats.binom.pmf(np.arange(km + 1), km, 1.0 / n)
    # merge the tail so every expected bin count is >= ~5
    cut = 8
    observed = np.concatenate([counts[:cut], [counts[cut:].sum()]])
    expected = np.concatenate([pmf[:cut], [pmf[cut:].sum()]]) * reps
    _, p_value = scipy_stats.chisquare(observed, expected)
    assert p_value > 0.001


def test_json_round_trip():
    H = sample_hypergraph(50, 20, 3, seed=5)
    doc = json.loads(json.dumps(to_json_dict(H)))
    H2 = from_json_dict(doc)
    assert H2.n == H.n and H2.k == H.k and H2.seed == H.seed
    assert np.array_equal(H2.incidences, H.incidences)


def test_incidences_are_read_only():
    H = sample_hypergraph(10, 5, 3, seed=1)
    with pytest.raises(ValueError):
        H.incidences[0, 0] = 3
