"""Deterministic 64-bit random number generation.

Everything stochastic in this package flows through SplitMix64 so that a
(master seed, trial index) pair pins down each trial exactly, in any
process, on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(x: int) -> int:
    """One SplitMix64 finalization round of a 64-bit value."""
    x &= MASK64
    x = ((x ^ (x >> 30)) * _MIX1) & MASK64
    x = ((x ^ (x >> 27)) * _MIX2) & MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class Seed:
    """Master seed plus trial index; the derived stream is a pure function of both."""

    master: int
    trial_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.master <= MASK64:
            raise ValueError("master seed must fit in 64 bits")
        if self.trial_index < 0:
            raise ValueError("trial_index must be nonnegative")

    def derived(self) -> int:
        return derive_seed(self.master, self.trial_index)


def derive_seed(master: int, trial_index: int) -> int:
    """Per-trial 64-bit seed: mix the master, add the index, mix again."""
    if trial_index < 0:
        raise ValueError("trial_index must be nonnegative")
    return mix64(mix64(master) + _GAMMA * (trial_index + 1))


class SplitMix64:
    """SplitMix64 stream: state advances by a fixed odd gamma, output is mixed."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & MASK64
        return mix64(self.state)

    def next_below(self, bound: int) -> int:
        """Uniform integer in [0, bound) by the multiply-shift reduction.

        Rejection-free; the residual bias is bounded by bound / 2**64, which
        is far below anything a statistical test at laboratory scale can see.
        """
        if bound <= 0:
            raise ValueError("bound must be positive")
        return (self.next_u64() * bound) >> 64

    def draws(self, count: int) -> list[int]:
        """The next `count` outputs, computed in bulk.

        Identical to calling next_u64 `count` times; vectorized because
        shuffles at n ~ 1e5 are hot paths in the experiment harness.
        """
        if count <= 0:
            return []
        states = (np.uint64(self.state)
                  + np.uint64(_GAMMA) * np.arange(1, count + 1, dtype=np.uint64))
        self.state = int(states[-1])
        with np.errstate(over="ignore"):
            x = states
            x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX1)
            x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX2)
            x = x ^ (x >> np.uint64(31))
        return x.tolist()
