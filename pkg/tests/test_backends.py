"""Pure-Python and compiled kernels must return bit-identical results."""

import numpy as np
import pytest

from cuckoopeel import Peeling, peel, sample_hypergraph
from cuckoopeel import _core_py as pure
from cuckoopeel._backend import backend_name

compiled = pytest.importorskip(
    "cuckoopeel._core_c", reason="compiled kernels not built"
)


def both(name, *args):
    a = getattr(pure, name)(*args)
    b = getattr(compiled, name)(*args)
    return a, b


def assert_same(a, b):
    if isinstance(a, tuple):
        assert len(a) == len(b)
        for x, y in zip(a, b):
            assert_same(x, y)
    elif isinstance(a, np.ndarray):
        assert np.array_equal(a, b)
        assert a.dtype == b.dtype
    else:
        assert a == b


def test_backend_selection_honours_environment():
    import os

    forced = os.environ.get("CUCKOOPEEL_BACKEND", "auto")
    expected = "pure" if forced == "pure" else "compiled"
    assert backend_name() == expected


@pytest.mark.parametrize(
    "seed,count,bound",
    [(0, 100, 7), (12345, 1000, 1000), (2**63 + 17, 5000, 2**32 - 1), (1, 0, 5)],
)
def test_sample_uniform_parity(seed, count, bound):
    assert_same(*both("sample_uniform", seed, count, bound))


@pytest.mark.parametrize(
    "n,m,k,seed",
    [(50, 30, 3, 1), (50, 45, 3, 2), (100, 95, 3, 3), (30, 40, 3, 4),
     (200, 150, 4, 5), (1000, 750, 3, 6), (1, 2, 3, 7), (10, 0, 3, 8)],
)
@pytest.mark.parametrize("randomize", [False, True])
def test_peel_parity(n, m, k, seed, randomize):
    H = sample_hypergraph(n, m, k, seed)
    assert_same(*both("peel_kernel", n, k, H.flat(), seed * 7 + randomize, randomize))


def _peelable(n, m, k, base_seed):
    for s in range(base_seed, base_seed + 50):
        H = sample_hypergraph(n, m, k, s)
        p = peel(H, seed=s, randomize=True)
        if isinstance(p, Peeling):
            return H, p
    raise AssertionError("no peelable instance found")


def test_dependence_stats_parity():
    H, p = _peelable(200, 130, 3, 9)
    assert_same(
        *both("dependence_stats", H.n, H.k, H.flat(), p.orientation, p.order)
    )


def test_dependence_stats_parity_with_overflow():
    from cuckoopeel import from_explicit

    H = from_explicit(81, 3, [(i, i + 1, i + 1) for i in range(80)])
    p = peel(H)
    a, b = both("dependence_stats", H.n, H.k, H.flat(), p.orientation, p.order)
    assert a[2] is True or a[2] == 1  # overflow flagged
    assert_same(a[:2], b[:2])
    assert bool(a[2]) == bool(b[2])


@pytest.mark.parametrize("policy", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("use_target", [False, True])
def test_rep_parity(policy, use_target):
    H, p = _peelable(100, 70, 3, 12)
    peel_key = None
    if policy == 3:
        peel_key = pure.dependence_stats(
            H.n, H.k, H.flat(), p.orientation, p.order
        )[0]
    target = p.orientation if use_target else None
    iolds = (0,) if use_target else (0, 1, 2)
    for iold in iolds:
        assert_same(
            *both(
                "rep_kernel",
                H.n,
                H.k,
                H.flat(),
                991 + policy,
                policy,
                target,
                20_000,
                iold,
                peel_key,
            )
        )


def test_rep_parity_when_capped():
    H = sample_hypergraph(2, 3, 3, 1)  # 3 edges on 2 vertices: unorientable
    assert_same(
        *both("rep_kernel", 2, 3, H.flat(), 5, 0, None, 500, 0, None)
    )


@pytest.mark.parametrize(
    "n,m,k,seed,iold,cap",
    [
        (100, 75, 3, 21, 1, 10**6),
        (100, 95, 3, 22, 0, 500),
        (50, 48, 3, 23, 2, 10**6),
        (1, 3, 3, 24, 1, 100),
    ],
)
def test_bulk_insert_parity(n, m, k, seed, iold, cap):
    H = sample_hypergraph(n, m, k, seed)
    assert_same(*both("bulk_insert_kernel", n, k, H.flat(), seed, iold, cap))


@pytest.mark.parametrize(
    "n,m,k,seed",
    [(100, 60, 3, 31), (1000, 700, 3, 32), (500, 450, 3, 33), (200, 120, 4, 34),
     (10, 0, 3, 35)],
)
def test_continuous_peel_parity(n, m, k, seed):
    # exact equality including float64 sample times and lifetimes order
    grid = np.round(np.arange(0, 5.0001, 0.25), 10)
    assert_same(*both("continuous_peel_kernel", n, m, k, seed, grid))


def test_continuous_peel_parity_empty_grid():
    assert_same(
        *both("continuous_peel_kernel", 50, 30, 3, 77, np.zeros(0, dtype=np.float64))
    )


@pytest.mark.parametrize("mod", [pure, compiled])
def test_kernels_reject_mismatched_shapes(mod):
    H = sample_hypergraph(20, 10, 3, 1)
    p = peel(H)
    assert isinstance(p, Peeling)
    with pytest.raises(ValueError):
        mod.dependence_stats(20, 3, H.flat(), p.orientation, p.order[:-1])
    with pytest.raises(ValueError):
        mod.rep_kernel(
            20, 3, H.flat(), 1, 0, p.orientation[:-1], 100, 0, None
        )
    with pytest.raises(ValueError):
        mod.rep_kernel(
            20, 3, H.flat(), 1, 3, None, 100, 0,
            np.zeros(3, dtype=np.uint64),
        )


def test_backend_env_override(tmp_path):
    import subprocess
    import sys

    code = "import cuckoopeel; print(cuckoopeel.backend_name())"
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"CUCKOOPEEL_BACKEND": "pure", "PATH": "/usr/bin:/bin"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "pure"
