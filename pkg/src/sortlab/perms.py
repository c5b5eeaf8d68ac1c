"""Permutations of 1..n and the combinatorial primitives built on them.

A permutation is held as a tuple of the integers 1..n, each exactly once.
Positions are 0-based in code; anything serialized for the outside world
is converted to 1-based at the service boundary.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right, insort

from .rng import Seed, SplitMix64

Perm = tuple[int, ...]


def as_permutation(values) -> Perm:
    """Validate and normalize a sequence to a permutation tuple of 1..n."""
    pi = tuple(values)
    n = len(pi)
    if n == 0:
        raise ValueError("empty permutation (n must be >= 1)")
    seen = [False] * (n + 1)
    for v in pi:
        if not isinstance(v, int) or not 1 <= v <= n or seen[v]:
            raise ValueError(f"not a permutation of 1..{n}: {pi!r}")
        seen[v] = True
    return pi


def identity(n: int) -> Perm:
    if n < 1:
        raise ValueError("n must be >= 1")
    return tuple(range(1, n + 1))


def random_permutation(n: int, seed: Seed) -> Perm:
    """Uniform random permutation of 1..n, reproducible from the seed.

    Fisher-Yates driven by the per-trial SplitMix64 stream; each swap index
    comes from the multiply-shift bounded draw, so the shuffle is unbiased
    up to the 2**-64-level reduction bias.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return permutation_from_stream(n, SplitMix64(seed.derived()))


def permutation_from_stream(n: int, gen: SplitMix64) -> Perm:
    """Fisher-Yates shuffle of 1..n consuming exactly n-1 draws from `gen`."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = list(range(1, n + 1))
    if n > 1:
        draws = gen.draws(n - 1)
        t = 0
        for i in range(n - 1, 0, -1):
            j = (draws[t] * (i + 1)) >> 64
            t += 1
            a[i], a[j] = a[j], a[i]
    return tuple(a)


def unrank_permutation(n: int, rank: int) -> Perm:
    """The rank-th permutation of 1..n in lexicographic order (factoradic)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    total = 1
    for i in range(2, n + 1):
        total *= i
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range for n={n}")
    pool = list(range(1, n + 1))
    out = []
    for i in range(n - 1, -1, -1):
        f = 1
        for j in range(2, i + 1):
            f *= j
        idx, rank = divmod(rank, f)
        out.append(pool.pop(idx))
    return tuple(out)


def count_inversions(pi) -> int:
    """Number of out-of-order pairs, by bottom-up merge counting."""
    a = list(pi)
    n = len(a)
    inv = 0
    width = 1
    buf = [0] * n
    while width < n:
        for lo in range(0, n - width, 2 * width):
            mid = lo + width
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[i] <= a[j]:
                    buf[k] = a[i]
                    i += 1
                else:
                    buf[k] = a[j]
                    inv += mid - i
                    j += 1
                k += 1
            buf[k:hi] = a[i:mid] if i < mid else a[j:hi]
            a[lo:hi] = buf[lo:hi]
        width *= 2
    return inv


def lis_length(pi) -> int:
    """Length of a longest strictly increasing subsequence (patience piles)."""
    tails: list[int] = []
    for v in pi:
        k = bisect_left(tails, v)
        if k == len(tails):
            tails.append(v)
        else:
            tails[k] = v
    return len(tails)


def longest_increasing_subsequence(pi) -> tuple[int, tuple[int, ...]]:
    """(length, positions) of one longest strictly increasing subsequence.

    Patience piles with back-pointers; O(n log n). The witness positions are
    0-based indices into `pi`, increasing, with strictly increasing values.
    """
    tails: list[int] = []       # smallest tail value per pile
    tail_pos: list[int] = []    # position of that tail
    prev = [-1] * len(pi)       # back-pointer per position
    for i, v in enumerate(pi):
        k = bisect_left(tails, v)
        if k > 0:
            prev[i] = tail_pos[k - 1]
        if k == len(tails):
            tails.append(v)
            tail_pos.append(i)
        else:
            tails[k] = v
            tail_pos[k] = i
    if not tails:
        raise ValueError("empty permutation")
    chain = []
    i = tail_pos[-1]
    while i != -1:
        chain.append(i)
        i = prev[i]
    chain.reverse()
    return len(chain), tuple(chain)


def longest_decreasing_subsequence(pi) -> tuple[int, tuple[int, ...]]:
    """Mirror of LIS on the value-complement v -> n+1-v (same positions)."""
    n = len(pi)
    return longest_increasing_subsequence(tuple(n + 1 - v for v in pi))


def lds_length(pi) -> int:
    n = len(pi)
    return lis_length(tuple(n + 1 - v for v in pi))


def inversion_table_encode(pi) -> tuple[int, ...]:
    """counts[v-1] = number of values larger than v standing left of v."""
    pi = as_permutation(pi)
    n = len(pi)
    counts = [0] * n
    seen: list[int] = []
    for v in pi:
        counts[v - 1] = len(seen) - bisect_right(seen, v)
        insort(seen, v)
    return tuple(counts)


def inversion_table_decode(counts, n: int) -> Perm:
    """Inverse of inversion_table_encode; rejects tables violating counts[v] <= n-v."""
    counts = list(counts)
    if len(counts) != n:
        raise ValueError(f"table length {len(counts)} != n ({n})")
    for v in range(1, n + 1):
        c = counts[v - 1]
        if not 0 <= c <= n - v:
            raise ValueError(f"counts[{v}] = {c} exceeds the {n - v} larger values")
    out: list[int] = []
    for v in range(n, 0, -1):
        out.insert(counts[v - 1], v)
    return tuple(out)


def unsort_by_larger_left_counts(sorted_values, counts) -> list[int]:
    """Rebuild the ordering of `sorted_values` in which each value v had
    counts[v] larger values to its left.

    Values are inserted from largest to smallest at index counts[v]; every
    element already placed is larger, so the count is exact. Raises
    ValueError when a count is infeasible for its rank.
    """
    out: list[int] = []
    for t in range(len(sorted_values) - 1, -1, -1):
        v = sorted_values[t]
        c = counts[v]
        placed = len(out)
        if not 0 <= c <= placed:
            raise ValueError(
                f"count {c} for value {v} infeasible: only {placed} larger values exist")
        out.insert(c, v)
    return out
