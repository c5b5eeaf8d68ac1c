"""Sorting with networks of stacks and queues.

Two arrangements are modeled:

* parallel: every container is filled straight from the input during a
  placement phase, then drained smallest-first. The greedy placement is
  patience-style, so the number of stacks used equals the longest increasing
  subsequence of the input (queues: longest decreasing).

* sequential: k stacks S_0 .. S_{k-1} in series. Input enters S_0 only, a
  pop of S_j feeds S_{j+1}, and S_{k-1} pops to the output. Every element
  therefore passes through every stack, giving each stack exactly n pushes
  and n pops. Writing push=0 / pop=1 per stack yields k balanced bitstrings
  of length 2n that pin the input down completely: inside one stack the
  pops pair with pushes by nesting, and the t-th pop of S_j is the t-th
  push of S_{j+1}, so the output order can be chased back to input indices
  without knowing how the stacks' moves were interleaved globally.
"""

from __future__ import annotations

import heapq
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

from .perms import Perm, as_permutation

Move = tuple[str, int]  # ("push" | "pop", container index)


class SearchBudgetExceededError(RuntimeError):
    """The exhaustive schedule search hit its state budget before an answer."""


@dataclass(frozen=True)
class ParallelRun:
    """Outcome of one parallel stack or queue sort."""

    kind: str  # "stacks" or "queues"
    input: Perm
    output: Perm
    containers_used: int
    container_final_sizes: tuple[int, ...]
    move_log: tuple[Move, ...] | None = None
    # stacks only: predecessors[v] is the value that was the top of the stack
    # to the left when v was placed (0 for the first stack); last_top is the
    # top of the rightmost stack when placement finished.
    predecessors: tuple[int, ...] | None = field(default=None, repr=False)
    last_top: int | None = None


def parallel_stack_sort(pi, record_moves: bool = True,
                        validate: bool = True) -> ParallelRun:
    """Greedy placement onto the first stack whose top exceeds the element,
    then repeated smallest-top pops.

    Stack tops stay ascending left to right, so the placement scan is a
    binary search and every stack is internally descending bottom to top.
    """
    pi = as_permutation(pi) if validate else tuple(pi)
    n = len(pi)
    stacks: list[list[int]] = []
    tops: list[int] = []
    preds = [0] * (n + 1)
    moves: list[Move] | None = [] if record_moves else None
    for x in pi:
        k = bisect_right(tops, x)
        if k == len(tops):
            stacks.append([x])
            tops.append(x)
        else:
            assert x < tops[k]
            stacks[k].append(x)
            tops[k] = x
        if k > 0:
            preds[x] = tops[k - 1]
        if moves is not None:
            moves.append(("push", k))
    sizes = tuple(len(s) for s in stacks)
    last_top = tops[-1]
    # drain: each stack pops in increasing order, take the global minimum top
    out: list[int] = []
    heap = [(s[-1], j, len(s) - 1) for j, s in enumerate(stacks)]
    heapq.heapify(heap)
    while heap:
        v, j, idx = heapq.heappop(heap)
        out.append(v)
        if moves is not None:
            moves.append(("pop", j))
        if idx > 0:
            heapq.heappush(heap, (stacks[j][idx - 1], j, idx - 1))
    return ParallelRun(
        kind="stacks",
        input=pi,
        output=tuple(out),
        containers_used=len(stacks),
        container_final_sizes=sizes,
        move_log=tuple(moves) if moves is not None else None,
        predecessors=tuple(preds),
        last_top=last_top,
    )


def parallel_queue_sort(pi, record_moves: bool = True,
                        validate: bool = True) -> ParallelRun:
    """Greedy append to the first queue whose rear is smaller, then repeated
    smallest-front dequeues. Queue rears stay descending, queues ascending."""
    pi = as_permutation(pi) if validate else tuple(pi)
    queues: list[list[int]] = []
    neg_rears: list[int] = []
    moves: list[Move] | None = [] if record_moves else None
    for x in pi:
        k = bisect_left(neg_rears, -x)
        if k == len(neg_rears):
            queues.append([x])
            neg_rears.append(-x)
        else:
            assert neg_rears[k] > -x
            queues[k].append(x)
            neg_rears[k] = -x
        if moves is not None:
            moves.append(("push", k))
    sizes = tuple(len(q) for q in queues)
    out: list[int] = []
    heap = [(q[0], j, 0) for j, q in enumerate(queues)]
    heapq.heapify(heap)
    while heap:
        v, j, idx = heapq.heappop(heap)
        out.append(v)
        if moves is not None:
            moves.append(("pop", j))
        if idx + 1 < len(queues[j]):
            heapq.heappush(heap, (queues[j][idx + 1], j, idx + 1))
    return ParallelRun(
        kind="queues",
        input=pi,
        output=tuple(out),
        containers_used=len(queues),
        container_final_sizes=sizes,
        move_log=tuple(moves) if moves is not None else None,
    )


def backtrace_increasing_witness(run: ParallelRun) -> tuple[int, ...]:
    """Input positions of an increasing subsequence, one element per stack.

    Walks predecessor links from the top of the last stack; each link points
    at a smaller element that was placed earlier on the stack to the left.
    Requires a stacks run with placement provenance.
    """
    if run.kind != "stacks" or run.predecessors is None or run.last_top is None:
        raise ValueError("run lacks stack placement provenance")
    pos = {v: i for i, v in enumerate(run.input)}
    values = []
    v = run.last_top
    while v != 0:
        values.append(v)
        v = run.predecessors[v]
    values.reverse()
    witness = tuple(pos[v] for v in values)
    assert len(witness) == run.containers_used
    return witness


# ---------------------------------------------------------------------------
# sequential stacks
# ---------------------------------------------------------------------------

@dataclass
class SequentialSimResult:
    output: tuple[int, ...]
    ok: bool
    error_index: int | None = None
    reason: str | None = None


def sequential_simulate(pi, moves, k: int) -> SequentialSimResult:
    """Run a move schedule on k stacks in series.

    ok is True only for a legal schedule whose output is the fully sorted
    list; an illegal move reports its index and leaves ok False.
    """
    pi = as_permutation(pi)
    if k < 1:
        raise ValueError("k must be >= 1")
    n = len(pi)
    stacks: list[list[int]] = [[] for _ in range(k)]
    out: list[int] = []
    consumed = 0
    for t, (op, j) in enumerate(moves):
        if op == "push":
            if j != 0:
                return SequentialSimResult(tuple(out), False, t,
                                           "input may only be pushed onto stack 0")
            if consumed == n:
                return SequentialSimResult(tuple(out), False, t, "input exhausted")
            stacks[0].append(pi[consumed])
            consumed += 1
        elif op == "pop":
            if not 0 <= j < k:
                return SequentialSimResult(tuple(out), False, t,
                                           f"no stack {j} in a {k}-stack network")
            if not stacks[j]:
                return SequentialSimResult(tuple(out), False, t,
                                           f"pop of empty stack {j}")
            v = stacks[j].pop()
            if j < k - 1:
                stacks[j + 1].append(v)
            else:
                out.append(v)
        else:
            return SequentialSimResult(tuple(out), False, t, f"unknown op {op!r}")
    sorted_ok = out == list(range(1, n + 1))
    reason = None if sorted_ok else "output is not the sorted list"
    return SequentialSimResult(tuple(out), sorted_ok, None, reason)


@dataclass
class SearchResult:
    min_k: int | None
    schedule: list[Move] | None
    states_explored: int


def _search_at_k(pi: Perm, k: int, budget: int) -> tuple[list[Move] | None, int]:
    """DFS for any schedule sorting pi with exactly k serial stacks.

    The final stack is popped exactly when its top is the next value the
    sorted output needs (popping anything else can never sort, and popping
    the right value is always safe), so only pushes and interior pops branch.
    """
    n = len(pi)
    seen: set[tuple[int, tuple[tuple[int, ...], ...]]] = set()
    states = 0

    def dfs(consumed: int, stacks: tuple[tuple[int, ...], ...],
            produced: int) -> list[Move] | None:
        nonlocal states
        # drain all forced output pops first
        forced: list[Move] = []
        work = None
        last = stacks[-1]
        while last and last[-1] == produced + 1:
            forced.append(("pop", k - 1))
            produced += 1
            last = last[:-1]
        if forced:
            work = stacks[:-1] + (last,)
        else:
            work = stacks
        if produced == n:
            return forced
        key = (consumed, work)
        if key in seen:
            return None
        seen.add(key)
        states += 1
        if states > budget:
            raise SearchBudgetExceededError(
                f"exceeded {budget} states searching k={k}, n={n}")
        if consumed < n:
            ns = (work[0] + (pi[consumed],),) + work[1:]
            res = dfs(consumed + 1, ns, produced)
            if res is not None:
                return forced + [("push", 0)] + res
        for j in range(k - 1):
            if work[j]:
                v = work[j][-1]
                ns = work[:j] + (work[j][:-1], work[j + 1] + (v,)) + work[j + 2:]
                res = dfs(consumed, ns, produced)
                if res is not None:
                    return forced + [("pop", j)] + res
        return None

    schedule = dfs(0, ((),) * k, 0)
    return schedule, states


def sequential_search_min_stacks(pi, k_max: int = 6,
                                 max_states: int = 2_000_000) -> SearchResult:
    """Smallest k <= k_max for which some schedule sorts pi, with a witness.

    Exhaustive, memoized; intended for n <= 8. Raises
    SearchBudgetExceededError instead of guessing when the state budget runs
    out, and reports min_k None when no k <= k_max suffices.
    """
    pi = as_permutation(pi)
    total_states = 0
    for k in range(1, k_max + 1):
        schedule, states = _search_at_k(pi, k, max_states - total_states)
        total_states += states
        if schedule is not None:
            return SearchResult(k, schedule, total_states)
    return SearchResult(None, None, total_states)


def search_schedule_at_k(pi, k: int,
                         max_states: int = 2_000_000) -> list[Move] | None:
    """Witness schedule using exactly k serial stacks, or None."""
    pi = as_permutation(pi)
    schedule, _ = _search_at_k(pi, k, max_states)
    return schedule


# ---------------------------------------------------------------------------
# push/pop bitstring codec
# ---------------------------------------------------------------------------

def pushpop_encode(moves, k: int, n: int) -> list[str]:
    """Per-stack chronological push/pop bitstrings ('0' push, '1' pop).

    A pop of S_j (j < k-1) is simultaneously a push onto S_{j+1} and is
    recorded in both strings. Only complete sorting schedules are encodable:
    every string must come out balanced with n of each bit.
    """
    strings: list[list[str]] = [[] for _ in range(k)]
    depth = [0] * k
    consumed = 0
    for t, (op, j) in enumerate(moves):
        if op == "push":
            if j != 0:
                raise ValueError(f"move {t}: input pushes must target stack 0")
            consumed += 1
            strings[0].append("0")
            depth[0] += 1
        elif op == "pop":
            if not 0 <= j < k:
                raise ValueError(f"move {t}: no stack {j}")
            if depth[j] == 0:
                raise ValueError(f"move {t}: pop of empty stack {j}")
            strings[j].append("1")
            depth[j] -= 1
            if j < k - 1:
                strings[j + 1].append("0")
                depth[j + 1] += 1
        else:
            raise ValueError(f"move {t}: unknown op {op!r}")
    if consumed != n or any(d != 0 for d in depth):
        raise ValueError("schedule is not a complete run: stacks not drained "
                         "or input not fully consumed")
    out = ["".join(s) for s in strings]
    assert all(len(s) == 2 * n for s in out)
    return out


def _check_balanced(s: str, n: int, j: int) -> None:
    if len(s) != 2 * n:
        raise ValueError(f"stack {j}: string length {len(s)} != 2n = {2 * n}")
    depth = 0
    for ch in s:
        if ch == "0":
            depth += 1
        elif ch == "1":
            depth -= 1
            if depth < 0:
                raise ValueError(f"stack {j}: pop before matching push")
        else:
            raise ValueError(f"stack {j}: invalid character {ch!r}")
    if depth != 0:
        raise ValueError(f"stack {j}: pushes and pops do not balance")


def _lifo_match(s: str) -> list[int]:
    """match[t] = ordinal of the push that the t-th pop removes."""
    pending: list[int] = []
    match: list[int] = []
    pushes = 0
    for ch in s:
        if ch == "0":
            pending.append(pushes)
            pushes += 1
        else:
            match.append(pending.pop())
    return match


def pushpop_decode(strings, k: int, n: int) -> Perm:
    """Recover the input permutation from k per-stack bitstrings.

    Output position t chases back through the stacks: the t-th pop of the
    last stack nests with one of its pushes, which is a pop of the stack
    before it, and so on down to an input index. The strings are then
    checked to be jointly replayable as one legal schedule.
    """
    strings = list(strings)
    if len(strings) != k:
        raise ValueError(f"expected {k} strings, got {len(strings)}")
    for j, s in enumerate(strings):
        _check_balanced(s, n, j)
    matches = [_lifo_match(s) for s in strings]
    values = [0] * n
    for t in range(n):
        s = t
        for j in range(k - 1, -1, -1):
            s = matches[j][s]
        values[s] = t + 1
    pi = tuple(values)
    _replay_or_reject(strings, pi, k, n)
    return pi


def _replay_or_reject(strings: list[str], pi: Perm, k: int, n: int) -> None:
    """Greedily execute the per-stack strings as one schedule; any legal
    interleaving yields the same data flow, so greedy suffices. Rejects
    strings that deadlock or do not sort the decoded input."""
    cur = [0] * k
    stacks: list[list[int]] = [[] for _ in range(k)]
    consumed = 0
    out: list[int] = []
    total = sum(len(s) for s in strings)
    done = 0
    while done < total:
        if cur[0] < 2 * n and strings[0][cur[0]] == "0" and consumed < n:
            stacks[0].append(pi[consumed])
            consumed += 1
            cur[0] += 1
            done += 1
            continue
        for j in range(k):
            if cur[j] < 2 * n and strings[j][cur[j]] == "1" and stacks[j]:
                if j < k - 1:
                    if cur[j + 1] >= 2 * n or strings[j + 1][cur[j + 1]] != "0":
                        continue
                    stacks[j + 1].append(stacks[j].pop())
                    cur[j + 1] += 1
                    done += 1
                else:
                    out.append(stacks[j].pop())
                cur[j] += 1
                done += 1
                break
        else:
            raise ValueError("strings are not jointly replayable as a schedule")
    if out != list(range(1, n + 1)):
        raise ValueError("replayed schedule does not sort the decoded input")


def schedule_encoding_report(moves, k: int, n: int) -> dict:
    """Bit accounting for one complete schedule: the per-stack strings cost
    exactly 2kn bits; the explicit global event order is measured alongside."""
    events = len(list(moves))
    symbol_bits = max(1, math.ceil(math.log2(k + 1)))
    return {
        "n": n,
        "k": k,
        "per_stack_bits": 2 * k * n,
        "global_events": events,
        "interleaving_bits": events * symbol_bits,
    }


def moves_to_dicts(moves) -> list[dict]:
    return [{"op": op, "stack": j} for op, j in moves]


def moves_from_dicts(items) -> list[Move]:
    return [(d["op"], int(d["stack"])) for d in items]


def check_prefix_balance(moves) -> bool:
    """Pops never outnumber pushes for any container at any prefix."""
    depth: dict[int, int] = {}
    for op, j in moves:
        d = depth.get(j, 0)
        if op == "push":
            depth[j] = d + 1
        else:
            if d == 0:
                return False
            depth[j] = d - 1
    return True
