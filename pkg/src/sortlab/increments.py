"""Generators for the descending gap sequences that drive multi-pass sorting.

Every generated sequence is strictly decreasing and ends in 1, so the final
pass is a plain insertion sort and the output is always fully sorted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class IncrementSequence:
    """Strictly decreasing positive gaps h_1 > ... > h_p = 1, with a family tag."""

    increments: tuple[int, ...]
    family: str = "custom"

    def __post_init__(self) -> None:
        hs = self.increments
        if not hs:
            raise ValueError("at least one increment required")
        if hs[-1] != 1:
            raise ValueError("last increment must be 1")
        if any(a <= b for a, b in zip(hs, hs[1:])):
            raise ValueError(f"increments must be strictly decreasing: {hs}")
        if hs[0] < 1:
            raise ValueError("increments must be positive")

    @property
    def passes(self) -> int:
        return len(self.increments)

    def serialize(self) -> str:
        """Comma-separated decimal gaps, descending."""
        return ",".join(str(h) for h in self.increments)

    @classmethod
    def parse(cls, text: str, family: str = "custom") -> "IncrementSequence":
        return cls(tuple(int(t) for t in text.split(",")), family)


def gen_shell_original(n: int) -> IncrementSequence:
    """Repeated floor-halving: n//2, n//4, ..., 1. For n < 2 this is just (1)."""
    hs = []
    h = n // 2
    while h > 1:
        hs.append(h)
        h //= 2
    hs.append(1)
    return IncrementSequence(tuple(hs), "shell")


def _smooth_below(bound: int, a: int, b: int) -> list[int]:
    """All a^i * b^j below `bound`, descending, always including 1."""
    vals = {1}
    pa = 1
    while pa < bound:
        pab = pa
        while pab < bound:
            vals.add(pab)
            pab *= b
        pa *= a
    return sorted(vals, reverse=True)


def gen_pratt(n: int) -> IncrementSequence:
    """All gaps of the form 2^i * 3^j below n//2 (1 is always kept)."""
    return IncrementSequence(tuple(_smooth_below(n // 2, 2, 3)), "pratt")


def gen_chazelle(n: int, a: int) -> IncrementSequence:
    """Like gen_pratt but built from a and a+1; a=2 reproduces the 2,3 sequence."""
    if a < 2:
        raise ValueError("a must be >= 2")
    return IncrementSequence(tuple(_smooth_below(n // 2, a, a + 1)), f"chazelle({a})")


def gen_geometric(n: int, ratio: float) -> IncrementSequence:
    """Near-geometric gaps: h grows by ceil(h * ratio) from 1 until it reaches n."""
    if ratio <= 1:
        raise ValueError("ratio must be > 1")
    hs = [1]
    while True:
        nxt = math.ceil(hs[-1] * ratio)
        if nxt >= n:
            break
        hs.append(nxt)
    return IncrementSequence(tuple(reversed(hs)), f"geometric({ratio:g})")


def target_pass_count(n: int, p: int) -> IncrementSequence:
    """Exactly p gaps below n with ratios near n^(1/p).

    Grows geometrically from 1 and caps each gap so that the remaining slots
    still fit strictly below n; needs 1 <= p < n.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if p >= n:
        raise ValueError(f"p = {p} needs p < n = {n}")
    ratio = n ** (1.0 / p)
    hs = [1]
    for j in range(1, p):
        nxt = max(hs[-1] + 1, math.ceil(hs[-1] * ratio))
        cap = n - p + j
        hs.append(min(nxt, cap))
    seq = IncrementSequence(tuple(reversed(hs)), f"target(p={p})")
    assert seq.passes == p and seq.increments[0] < n
    return seq


def make_increments(family: str, n: int, *, p: int | None = None,
                    a: int | None = None, ratio: float | None = None,
                    custom: tuple[int, ...] | None = None) -> IncrementSequence:
    """Dispatch by family tag; used by the service and the experiment runner."""
    if family == "shell":
        return gen_shell_original(n)
    if family == "pratt":
        return gen_pratt(n)
    if family == "chazelle":
        return gen_chazelle(n, 2 if a is None else a)
    if family == "geometric":
        if ratio is None:
            raise ValueError("geometric family needs a ratio")
        return gen_geometric(n, ratio)
    if family == "target":
        if p is None:
            raise ValueError("target family needs a pass count p")
        return target_pass_count(n, p)
    if family == "custom":
        if not custom:
            raise ValueError("custom family needs explicit increments")
        return IncrementSequence(tuple(custom), "custom")
    raise ValueError(f"unknown increment family: {family!r}")
