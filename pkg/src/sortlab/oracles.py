"""Brute-force reference implementations.

These are deliberately naive and share no code with the fast paths they
check. The verify suite and the test suite compare against them.
"""

from __future__ import annotations

from itertools import combinations


def inversions_pairscan(pi) -> int:
    """O(n^2) pair scan."""
    n = len(pi)
    return sum(1 for a in range(n) for b in range(a + 1, n) if pi[a] > pi[b])


def lis_dp(pi) -> tuple[int, tuple[int, ...]]:
    """O(n^2) dynamic program for a longest strictly increasing subsequence."""
    n = len(pi)
    if n == 0:
        raise ValueError("empty sequence")
    best = [1] * n
    prev = [-1] * n
    for j in range(1, n):
        vj = pi[j]
        bj, pj = 1, -1
        for i in range(j):
            if pi[i] < vj and best[i] + 1 > bj:
                bj = best[i] + 1
                pj = i
        best[j] = bj
        prev[j] = pj
    end = max(range(n), key=best.__getitem__)
    chain = []
    while end != -1:
        chain.append(end)
        end = prev[end]
    chain.reverse()
    return len(chain), tuple(chain)


def lis_dp_length(pi) -> int:
    n = len(pi)
    best = [1] * n
    for j in range(1, n):
        vj = pi[j]
        m = 0
        for i in range(j):
            if pi[i] < vj and best[i] > m:
                m = best[i]
        best[j] = m + 1
    return max(best)


def shellsort_stepwise(pi, increments):
    """Literal insertion-sort Shellsort, one neighbor comparison at a time.

    Returns (sorted list, m matrix pass-major over values, per-pass shift
    totals, per-pass raw comparison counts). The shift counter is maintained
    move by move, independently of any bookkeeping in the fast engine.
    """
    work = list(pi)
    n = len(work)
    m_by_pass = []
    shifts_by_pass = []
    raw_by_pass = []
    for h in increments:
        m_row = [0] * n
        shifts = 0
        raw = 0
        for start in range(min(h, n)):
            # insertion sort of the chain at positions start, start+h, ...
            idx = start + h
            while idx < n:
                v = work[idx]
                j = idx - h
                while j >= start:
                    raw += 1
                    if work[j] > v:
                        work[j + h] = work[j]
                        shifts += 1
                        m_row[v - 1] += 1
                        j -= h
                    else:
                        break
                work[j + h] = v
                idx += h
        m_by_pass.append(m_row)
        shifts_by_pass.append(shifts)
        raw_by_pass.append(raw)
    return work, m_by_pass, shifts_by_pass, raw_by_pass


def count_compositions(total: int, parts: int) -> int:
    """Number of ways to write `total` as `parts` ordered nonnegative summands.

    Counted by enumerating stars-and-bars separator placements one by one,
    not by a closed formula.
    """
    if parts < 1:
        raise ValueError("parts must be >= 1")
    if total < 0:
        raise ValueError("total must be >= 0")
    return sum(1 for _ in combinations(range(total + parts - 1), parts - 1))
