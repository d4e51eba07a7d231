import math

from hypothesis import given
from hypothesis import strategies as st

from cuckoopeel.rng import GOLDEN, MASK64, SplitMix64, derive_seed, mix64

seeds = st.integers(min_value=0, max_value=MASK64)


@given(seeds)
def test_stream_deterministic(seed):
    a = SplitMix64(seed)
    b = SplitMix64(seed)
    assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]


@given(seeds)
def test_outputs_are_64_bit(seed):
    s = SplitMix64(seed)
    for _ in range(10):
        assert 0 <= s.next_u64() <= MASK64


@given(seeds, st.integers(min_value=1, max_value=2**32))
def test_bounded_draws_in_range(seed, bound):
    s = SplitMix64(seed)
    for _ in range(10):
        assert 0 <= s.next_below(bound) < bound


@given(seeds)
def test_unit_draws_in_half_open_interval(seed):
    s = SplitMix64(seed)
    for _ in range(10):
        u = s.next_unit()
        assert 0.0 < u <= 1.0
        assert math.isfinite(-math.log(u))


def test_stream_matches_closed_form():
    seed = 987654321
    s = SplitMix64(seed)
    for i in range(8):
        assert s.next_u64() == mix64((seed + (i + 1) * GOLDEN) & MASK64)


def test_derived_seeds_distinct():
    seed = 42
    children = {derive_seed(seed, t) for t in range(1000)}
    assert len(children) == 1000
    assert derive_seed(seed, 0) != derive_seed(seed + 1, 0)


def test_mix64_is_stable():
    # frozen values so any change to the mixer is caught; the second one is
    # the canonical first output of a splitmix64 stream seeded with 0
    assert mix64(0) == 0
    assert mix64(1) == 0x5692161D100B05E5
    assert mix64(0x9E3779B97F4A7C15) == 0xE220A8397B1DCDAF
