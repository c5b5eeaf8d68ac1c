"""Multi-pass insertion sorting with a full per-element work trace.

Pass k with gap h splits the list into h interleaved chains (positions
congruent mod h) and insertion-sorts each chain. For every value v the
trace records how many larger chain-mates stood left of v when the pass
began; that is exactly the number of positions v moves during the pass.
The whole matrix of counters is a lossless encoding of the input: the
trace codec below reconstructs the original permutation from it.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass

from .increments import IncrementSequence
from .perms import Perm, as_permutation, unsort_by_larger_left_counts


class CorruptTraceError(ValueError):
    """A counter sequence that cannot have come from a real sorting run."""


@dataclass(frozen=True)
class ShellTrace:
    """Work counters of one sorting run.

    m is pass-major: m[k][v-1] is the move count of value v in pass k+1.
    comparisons holds the per-pass analytic figure (moves + n); raw_comparisons
    counts the key comparisons a literal neighbor-scanning insertion sort
    performs, which is smaller whenever an element runs off the chain front.
    """

    n: int
    increments: tuple[int, ...]
    m: tuple[tuple[int, ...], ...]
    per_pass_inversions: tuple[int, ...]
    total_M: int
    comparisons: tuple[int, ...]
    raw_comparisons: tuple[int, ...]

    @property
    def passes(self) -> int:
        return len(self.increments)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.passes,
            "increments": list(self.increments),
            "m": [list(row) for row in self.m],
            "per_pass_inversions": list(self.per_pass_inversions),
            "total_M": self.total_M,
            "comparisons": list(self.comparisons),
            "raw_comparisons": list(self.raw_comparisons),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, d: dict) -> "ShellTrace":
        return cls(
            n=d["n"],
            increments=tuple(d["increments"]),
            m=tuple(tuple(row) for row in d["m"]),
            per_pass_inversions=tuple(d["per_pass_inversions"]),
            total_M=d["total_M"],
            comparisons=tuple(d["comparisons"]),
            raw_comparisons=tuple(d["raw_comparisons"]),
        )


def shellsort_traced(pi, inc: IncrementSequence,
                     validate: bool = True) -> tuple[Perm, ShellTrace]:
    """Sort `pi` with the given gaps and return (sorted tuple, trace).

    Each chain is insertion-sorted via binary search over the sorted prefix;
    the move counts and comparison totals are identical to those of the
    literal neighbor-scan (see oracles.shellsort_stepwise), just cheaper.
    Gaps >= n produce singleton chains and therefore a recorded zero-move
    pass, so the trace shape stays n x p.
    """
    work = list(as_permutation(pi) if validate else pi)
    n = len(work)
    m_rows: list[tuple[int, ...]] = []
    pass_moves: list[int] = []
    pass_raw: list[int] = []
    for h in inc.increments:
        m_row = [0] * n
        moves = 0
        raw = 0
        if h == 1:
            chain = work
            prefix: list[int] = []
            for j, v in enumerate(chain):
                pos = bisect_right(prefix, v)
                prefix.insert(pos, v)
                mj = j - pos
                if j:
                    moves += mj
                    raw += mj + (mj < j)
                    m_row[v - 1] = mj
            work = prefix
        else:
            for start in range(min(h, n)):
                chain = work[start::h]
                prefix = []
                for j, v in enumerate(chain):
                    pos = bisect_right(prefix, v)
                    prefix.insert(pos, v)
                    mj = j - pos
                    if j:
                        moves += mj
                        raw += mj + (mj < j)
                        m_row[v - 1] = mj
                work[start::h] = prefix
        m_rows.append(tuple(m_row))
        pass_moves.append(moves)
        pass_raw.append(raw)
    trace = ShellTrace(
        n=n,
        increments=inc.increments,
        m=tuple(m_rows),
        per_pass_inversions=tuple(pass_moves),
        total_M=sum(pass_moves),
        comparisons=tuple(mv + n for mv in pass_moves),
        raw_comparisons=tuple(pass_raw),
    )
    return tuple(work), trace


def trace_encode(trace: ShellTrace) -> tuple[int, ...]:
    """Flatten the counter matrix pass-major, value-minor (the fixed codec order)."""
    return tuple(c for row in trace.m for c in row)


def trace_decode(counters, inc: IncrementSequence, n: int) -> Perm:
    """Reconstruct the input permutation from flattened counters.

    Runs the passes backward from the sorted list: before undoing pass k,
    every gap-h chain is sorted, and the pass-k counters say how many larger
    chain-mates each value had to its left, which pins the chain order down
    uniquely (values are re-inserted largest first at their counter index).
    """
    p = inc.passes
    counters = list(counters)
    if len(counters) != n * p:
        raise CorruptTraceError(
            f"expected {n * p} counters for n={n}, p={p}, got {len(counters)}")
    work = list(range(1, n + 1))
    counts = [0] * (n + 1)  # reused buffer indexed by value
    for k in range(p - 1, -1, -1):
        h = inc.increments[k]
        row = counters[k * n:(k + 1) * n]
        chain_cap = -(-n // h) - 1  # ceil(n/h) - 1 chain-mates at most
        for v in range(1, n + 1):
            c = row[v - 1]
            if not 0 <= c <= chain_cap:
                raise CorruptTraceError(
                    f"pass {k + 1}: counter {c} for value {v} exceeds chain bound {chain_cap}")
            counts[v] = c
        for start in range(min(h, n)):
            chain = work[start::h]
            if any(a >= b for a, b in zip(chain, chain[1:])):
                raise CorruptTraceError(
                    f"pass {k + 1}: chain at offset {start} not sorted while decoding")
            try:
                work[start::h] = unsort_by_larger_left_counts(chain, counts)
            except ValueError as exc:
                raise CorruptTraceError(f"pass {k + 1}: {exc}") from exc
    return tuple(work)
