"""Parallel and sequential container sorting."""

import dataclasses
import itertools

import pytest

from sortlab.networks import (SearchBudgetExceededError, backtrace_increasing_witness,
                              check_prefix_balance, moves_from_dicts, moves_to_dicts,
                              parallel_queue_sort, parallel_stack_sort, pushpop_decode,
                              pushpop_encode, schedule_encoding_report,
                              search_schedule_at_k, sequential_search_min_stacks,
                              sequential_simulate)
from sortlab.perms import (identity, lds_length, lis_length, permutation_from_stream,
                           random_permutation)
from sortlab.rng import Seed, SplitMix64


def all_perms(n):
    return itertools.permutations(range(1, n + 1))


# -- parallel ----------------------------------------------------------------

def test_stack_sort_examples():
    assert parallel_stack_sort(identity(6)).containers_used == 6
    assert parallel_stack_sort((6, 5, 4, 3, 2, 1)).containers_used == 1
    run = parallel_stack_sort((3, 1, 2))
    assert run.containers_used == 2
    assert run.output == (1, 2, 3)
    assert run.move_log[:3] == (("push", 0), ("push", 0), ("push", 1))
    assert [op for op, _ in run.move_log[3:]] == ["pop"] * 3
    for n in (3, 6, 11):
        shifted = tuple(range(2, n + 1)) + (1,)
        assert parallel_stack_sort(shifted).containers_used == n - 1


def test_queue_sort_examples():
    assert parallel_queue_sort(identity(6)).containers_used == 1
    for n in (2, 5, 9):
        assert parallel_queue_sort(tuple(range(n, 0, -1))).containers_used == n
    run = parallel_queue_sort((2, 3, 1))
    assert run.containers_used == 2 and run.output == (1, 2, 3)


def test_parallel_exhaustive_small():
    for n in range(1, 9):
        ident = identity(n)
        for pi in all_perms(n):
            rs = parallel_stack_sort(pi, validate=False)
            rq = parallel_queue_sort(pi, validate=False)
            assert rs.output == ident and rq.output == ident
            assert rs.containers_used == lis_length(pi)
            assert rq.containers_used == lds_length(pi)
            assert sum(rs.container_final_sizes) == n
            assert sum(rq.container_final_sizes) == n


def test_parallel_random_large():
    for t in range(10):
        n = 4096
        pi = random_permutation(n, Seed(31, t))
        rs = parallel_stack_sort(pi, record_moves=False)
        rq = parallel_queue_sort(pi, record_moves=False)
        assert rs.output == identity(n) == rq.output
        assert rs.containers_used == lis_length(pi)
        assert rq.containers_used == lds_length(pi)
        assert rs.move_log is None


def test_move_logs_balanced_and_conserving():
    for t in range(30):
        n = 2 + t * 2
        pi = random_permutation(n, Seed(32, t))
        for run in (parallel_stack_sort(pi), parallel_queue_sort(pi)):
            log = run.move_log
            assert len(log) == 2 * n
            assert check_prefix_balance(log)
            pushes = sum(1 for op, _ in log if op == "push")
            assert pushes == n
    assert not check_prefix_balance([("pop", 0)])


def test_moves_dict_roundtrip():
    run = parallel_stack_sort((3, 1, 2))
    dicts = moves_to_dicts(run.move_log)
    assert dicts[0] == {"op": "push", "stack": 0}
    assert moves_from_dicts(dicts) == list(run.move_log)


def test_backtrace_witness():
    run = parallel_stack_sort((3, 1, 2))
    w = backtrace_increasing_witness(run)
    assert len(w) == 2
    vals = [run.input[i] for i in w]
    assert all(a < b for a, b in zip(vals, vals[1:]))

    run = parallel_stack_sort(identity(5))
    assert backtrace_increasing_witness(run) == (0, 1, 2, 3, 4)

    for t in range(300):
        n = 128
        pi = random_permutation(n, Seed(33, t))
        run = parallel_stack_sort(pi, record_moves=False)
        w = backtrace_increasing_witness(run)
        assert len(w) == run.containers_used == lis_length(pi)
        vals = [pi[i] for i in w]
        assert all(a < b for a, b in zip(w, w[1:]))
        assert all(a < b for a, b in zip(vals, vals[1:]))


def test_backtrace_witness_bulk_matches_patience():
    """1e4 random trials at n=512: the backtraced chain always has LIS length."""
    n = 512
    gen = SplitMix64(909)
    for _ in range(10_000):
        pi = permutation_from_stream(n, gen)
        run = parallel_stack_sort(pi, record_moves=False, validate=False)
        w = backtrace_increasing_witness(run)
        assert len(w) == lis_length(pi)


def test_backtrace_requires_provenance():
    with pytest.raises(ValueError):
        backtrace_increasing_witness(parallel_queue_sort((2, 1)))
    run = parallel_stack_sort((2, 1))
    stripped = dataclasses.replace(run, predecessors=None)
    with pytest.raises(ValueError):
        backtrace_increasing_witness(stripped)


# -- sequential ----------------------------------------------------------------

def test_sequential_simulate_sorting_two():
    res = sequential_simulate((2, 1), [("push", 0), ("push", 0),
                                       ("pop", 0), ("pop", 0)], 1)
    assert res.ok and res.output == (1, 2) and res.error_index is None


def test_sequential_simulate_errors():
    res = sequential_simulate((2, 1), [("pop", 0)], 1)
    assert not res.ok and res.error_index == 0
    res = sequential_simulate((2, 1), [("push", 0)] * 3, 1)
    assert not res.ok and res.error_index == 2
    res = sequential_simulate((2, 1), [("push", 1)], 2)
    assert not res.ok and res.error_index == 0
    res = sequential_simulate((2, 1), [("push", 0), ("pop", 5)], 2)
    assert not res.ok and res.error_index == 1
    # legal but incomplete: not ok, but no offending move either
    res = sequential_simulate((2, 1), [("push", 0)], 1)
    assert not res.ok and res.error_index is None


def test_sequential_simulate_conserves_elements():
    for t in range(40):
        n = 2 + t % 6
        pi = random_permutation(n, Seed(34, t))
        found = sequential_search_min_stacks(pi)
        res = sequential_simulate(pi, found.schedule, found.min_k)
        assert res.ok
        assert sorted(res.output) == list(range(1, n + 1))


def test_search_examples():
    assert sequential_search_min_stacks((2, 1)).min_k == 1
    assert sequential_search_min_stacks((1, 2)).min_k == 1
    assert sequential_search_min_stacks((2, 3, 1)).min_k == 2


def test_search_budget_error():
    with pytest.raises(SearchBudgetExceededError):
        sequential_search_min_stacks((5, 1, 4, 2, 3), max_states=3)


def test_search_worst_case_monotone_small():
    worst = []
    for n in range(2, 6):
        worst.append(max(sequential_search_min_stacks(pi).min_k
                         for pi in all_perms(n)))
    assert worst == sorted(worst)
    assert worst[0] == 1


def test_search_at_fixed_k():
    sched = search_schedule_at_k((2, 3, 1), 2)
    assert sched is not None
    assert sequential_simulate((2, 3, 1), sched, 2).ok
    assert search_schedule_at_k((2, 3, 1), 1) is None


# -- push/pop codec -------------------------------------------------------------

def test_pushpop_known_strings():
    sched = [("push", 0), ("push", 0), ("pop", 0), ("pop", 0)]
    assert pushpop_encode(sched, 1, 2) == ["0011"]
    assert pushpop_decode(["0011"], 1, 2) == (2, 1)
    sched = [("push", 0), ("pop", 0)] * 4
    assert pushpop_encode(sched, 1, 4) == ["01010101"]
    assert pushpop_decode(["01010101"], 1, 4) == (1, 2, 3, 4)


def test_pushpop_strings_balanced():
    for t in range(30):
        n = 2 + t % 5
        pi = random_permutation(n, Seed(35, t))
        res = sequential_search_min_stacks(pi)
        strings = pushpop_encode(res.schedule, res.min_k, n)
        assert len(strings) == res.min_k
        for s in strings:
            assert len(s) == 2 * n
            assert s.count("0") == n and s.count("1") == n
        assert pushpop_decode(strings, res.min_k, n) == pi


def test_pushpop_roundtrip_exhaustive_small():
    for n in range(2, 6):
        k = 2
        seen = {}
        for pi in all_perms(n):
            sched = search_schedule_at_k(pi, k)
            assert sched is not None
            strings = tuple(pushpop_encode(sched, k, n))
            assert pushpop_decode(strings, k, n) == pi
            assert strings not in seen
            seen[strings] = pi


def test_pushpop_encode_rejects_bad_schedules():
    with pytest.raises(ValueError):
        pushpop_encode([("push", 0), ("pop", 0)], 1, 2)  # incomplete
    with pytest.raises(ValueError):
        pushpop_encode([("pop", 0)], 1, 1)  # pop before push
    with pytest.raises(ValueError):
        pushpop_encode([("push", 1), ("pop", 1)], 2, 1)  # input must enter at 0


def test_pushpop_decode_rejects_malformed():
    with pytest.raises(ValueError):
        pushpop_decode(["0011"], 2, 2)  # wrong string count
    with pytest.raises(ValueError):
        pushpop_decode(["001"], 1, 2)  # wrong length
    with pytest.raises(ValueError):
        pushpop_decode(["1001"], 1, 2)  # pop before push
    with pytest.raises(ValueError):
        pushpop_decode(["0021"], 1, 2)  # invalid character
    # balanced strings for a deeper network decode fine
    pi = pushpop_decode(["0101", "0011", "0101"], 3, 2)
    assert sorted(pi) == [1, 2]


def test_encoding_report():
    sched = [("push", 0), ("push", 0), ("pop", 0), ("pop", 0)]
    rep = schedule_encoding_report(sched, 1, 2)
    assert rep["per_stack_bits"] == 4
    assert rep["global_events"] == 4
    assert rep["interleaving_bits"] == 4  # one bit per event at k=1
