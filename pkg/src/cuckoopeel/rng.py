"""Deterministic random number generation.

Everything in this package draws randomness from one named, versioned
generator so that results are bit-reproducible across platforms and across
the pure-Python and compiled kernel backends:

* generator: ``splitmix64/v1``.  A stream with 64-bit state ``s`` advances by
  the golden-ratio constant and outputs ``mix64(s)``; the i-th output of a
  stream seeded with ``s`` is ``mix64(s + (i+1)*GOLDEN)``.
* bounded integers: ``((x >> 32) * bound) >> 32`` maps an output ``x``
  uniformly onto ``[0, bound)`` for any ``bound <= 2**32`` (bias below
  2**-32, far under anything observable at the scales simulated here).
* unit doubles: ``((x >> 11) + 1) * 2**-53`` in ``(0, 1]``, so ``-log(u)``
  is a finite Exp(1) variate.

Stream fan-out rule: ``derive_seed(seed, tag)`` yields the seed of child
stream ``tag``.  Experiment harnesses derive per-trial seeds with
``derive_seed(master, trial)``; simulation kernels derive their internal
substreams from the run seed with small fixed tags (per-edge streams use the
edge index, see the kernel docstrings).  Adding trials therefore never
perturbs earlier trials.
"""
from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

RNG_NAME = "splitmix64/v1"


def mix64(z: int) -> int:
    """Finalizing 64-bit mixer of splitmix64 (a bijection on 64-bit words)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, tag: int) -> int:
    """Seed of child stream ``tag`` (a non-negative int) of ``seed``.

    Children with distinct tags are distinct and their output streams are
    statistically independent of each other and of the parent's.
    """
    if tag < 0:
        raise ValueError("stream tag must be non-negative")
    return mix64((seed + (tag + 1) * GOLDEN) & MASK64)


class SplitMix64:
    """A single splitmix64 output stream."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        s = (self.state + GOLDEN) & MASK64
        self.state = s
        return mix64(s)

    def next_below(self, bound: int) -> int:
        """Uniform integer in [0, bound); requires 1 <= bound <= 2**32."""
        return ((self.next_u64() >> 32) * bound) >> 32

    def next_unit(self) -> float:
        """Uniform double in (0, 1]."""
        return ((self.next_u64() >> 11) + 1) * 2.0**-53

    def next_exp(self, rate: float = 1.0) -> float:
        """Exponential variate with the given rate."""
        return -math.log(self.next_unit()) / rate
