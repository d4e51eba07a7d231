#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each hot kernel on identical inputs through both backends, checks the
outputs agree bit for bit, and prints a timing table.

    python3 benchmarks/bench_backends.py [--n 100000] [--reps 3]
"""
import argparse
import time

import numpy as np

from cuckoopeel import _core_py as pure
from cuckoopeel import sample_hypergraph

try:
    from cuckoopeel import _core_c as compiled
except ImportError:
    compiled = None


def _time(fn, *args, reps=1):
    best = float("inf")
    out = None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _equal(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()

    if compiled is None:
        print("compiled backend not built; run pip install -e . first")
        return 1

    n = args.n
    m = int(0.75 * n)
    k = 3
    H = sample_hypergraph(n, m, k, seed=1)
    flat = H.flat()
    orient, order, npeeled = compiled.peel_kernel(n, k, flat, 0, True)
    if npeeled != m:
        H = sample_hypergraph(n, m, k, seed=2)
        flat = H.flat()
        orient, order, npeeled = compiled.peel_kernel(n, k, flat, 0, True)
    grid = np.round(np.arange(0.0, 4.0001, 0.05), 10)

    cases = [
        ("sample_uniform", (7, k * m, n)),
        ("peel_kernel", (n, k, flat, 0, True)),
        ("dependence_stats", (n, k, flat, orient, order)),
        ("rep_kernel", (n, k, flat, 5, 0, None, 10**8, 0, None)),
        ("bulk_insert_kernel", (n, k, flat, 5, 1, 10**6)),
        ("continuous_peel_kernel", (n, int(0.7 * n), k, 7, grid)),
    ]

    print(f"n={n}, m={m}, k={k}, reps={args.reps}")
    print(f"{'kernel':<24} {'pure':>10} {'compiled':>10} {'speedup':>8}  match")
    for name, call_args in cases:
        tp, rp = _time(getattr(pure, name), *call_args, reps=args.reps)
        tc, rc = _time(getattr(compiled, name), *call_args, reps=args.reps)
        match = "yes" if _equal(rp, rc) else "NO"
        print(f"{name:<24} {tp:>9.4f}s {tc:>9.4f}s {tp / tc:>7.1f}x  {match}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
