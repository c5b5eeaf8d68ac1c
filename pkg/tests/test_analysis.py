"""Bound numerics, fitting, aggregation."""

import math
from dataclasses import dataclass, field

import pytest

from sortlab import oracles
from sortlab.analysis import (BoundQuery, Welford, bound_ratio,
                              description_threshold_bits, fit_power_law,
                              inversion_lower_bound, lis_bound_check, log2_binomial,
                              log2_factorial, log_divisions, stirling_log2_binomial,
                              summarize_trials)
from sortlab.perms import lis_length
from sortlab.rng import SplitMix64


def test_log_divisions_examples():
    assert log_divisions(0, 7) == 0.0
    assert abs(log_divisions(2, 2) - math.log2(3)) < 1e-12
    assert abs(log_divisions(3, 3) - math.log2(10)) < 1e-12
    with pytest.raises(ValueError):
        log_divisions(-1, 2)
    with pytest.raises(ValueError):
        log_divisions(2, 0)


def test_log_divisions_matches_enumeration():
    for total in range(0, 11):
        for parts in range(1, 11):
            exact = oracles.count_compositions(total, parts)
            assert round(2 ** log_divisions(total, parts)) == exact


def test_log_divisions_monotone():
    for parts in (1, 3, 10, 100):
        vals = [log_divisions(m, parts) for m in range(0, 200, 7)]
        assert vals == sorted(vals)
    for m in (1, 5, 50):
        vals = [log_divisions(m, parts) for parts in range(1, 100, 3)]
        assert vals == sorted(vals)


def test_bound_query_validation():
    BoundQuery(10, 3)
    with pytest.raises(ValueError):
        BoundQuery(10, 10)
    with pytest.raises(ValueError):
        BoundQuery(10, 0)
    with pytest.raises(ValueError):
        BoundQuery(1, 1)


def test_bound_is_threshold_crossing():
    for n, p in ((64, 1), (256, 2), (1024, 3)):
        m_star = inversion_lower_bound(BoundQuery(n, p))
        target = description_threshold_bits(n)
        assert log_divisions(m_star, n * p) >= target
        if m_star > 0:
            assert log_divisions(m_star - 1, n * p) < target


def test_bound_monotone_in_n():
    for p in (1, 2, 3):
        vals = [inversion_lower_bound(BoundQuery(n, p))
                for n in (64, 128, 256, 512, 1024, 4096)]
        assert vals == sorted(vals)


def test_bound_p1_ratio_band():
    """Single-pass bound is quadratic: M*/n^2 sits in a narrow fixed band."""
    ratios = [inversion_lower_bound(BoundQuery(2 ** k, 1)) / 4 ** k
              for k in range(8, 21, 2)]
    assert all(0.10 < r < 0.16 for r in ratios)
    assert max(ratios) / min(ratios) < 1.5


def test_bound_ratio_band_small_p():
    for p in (1, 2, 3):
        ratios = [bound_ratio(BoundQuery(2 ** k, p)) for k in range(8, 21, 4)]
        assert max(ratios) / min(ratios) < 3.0
        assert min(ratios) > 0


def test_stirling_cross_check():
    for a in (10 ** 3, 10 ** 4, 10 ** 6):
        for frac in (0.02, 0.1, 0.25, 0.5, 0.9):
            b = max(1, int(a * frac))
            exact = log2_binomial(a, b)
            assert abs(stirling_log2_binomial(a, b) - exact) / exact < 0.001
    assert stirling_log2_binomial(100, 0) == 0.0
    assert log2_binomial(5, 7) == float("-inf")


def test_log2_factorial():
    assert abs(log2_factorial(10) - math.log2(math.factorial(10))) < 1e-9
    with pytest.raises(ValueError):
        log2_factorial(-1)


def test_fit_exact_power_law():
    fr = fit_power_law([(n, 7.0 * n ** 1.5) for n in (8, 32, 128, 512)])
    assert abs(fr.exponent - 1.5) < 1e-9
    assert abs(fr.constant - 7.0) < 1e-6
    assert fr.r_squared > 1 - 1e-12


def test_fit_recovers_planted_exponents():
    for expo in (0.5, 1.0, 1.3333, 2.0, 2.75):
        fr = fit_power_law([(n, 0.31 * n ** expo) for n in (10, 100, 1000, 10000)])
        assert abs(fr.exponent - expo) < 1e-6


def test_fit_constant_data():
    fr = fit_power_law([(n, 3.3) for n in (10, 100, 1000)])
    assert abs(fr.exponent) < 1e-12
    assert abs(fr.constant - 3.3) < 1e-9


def test_fit_rejects_nonpositive_points():
    fr = fit_power_law([(10, 5.0), (20, 0.0), (40, 9.0), (80, 14.0)])
    assert len(fr.rejected) == 1 and fr.rejected[0].n == 20
    with pytest.raises(ValueError):
        fit_power_law([(10, 1.0), (20, -1.0), (30, 0.0)])
    with pytest.raises(ValueError):
        fit_power_law([(10, 1.0), (10, 2.0), (10, 3.0)])  # one distinct size


def test_welford_and_summaries():
    @dataclass
    class Rec:
        n: int
        p: int
        family: str
        metrics: dict = field(default_factory=dict)

    with pytest.raises(ValueError):
        summarize_trials([], "x")
    one = summarize_trials([Rec(8, 1, "f", {"x": 3.0})], "x")
    acc = one[(8, 1, "f")]
    assert acc.mean == 3.0 and acc.stderr is None and acc.count == 1
    two = summarize_trials([Rec(8, 1, "f", {"x": 1.0}),
                            Rec(8, 1, "f", {"x": 2.0})], "x")
    assert two[(8, 1, "f")].mean == 1.5
    with pytest.raises(ValueError):
        summarize_trials([Rec(8, 1, "f", {"y": 1.0})], "x")


def test_welford_merge_matches_sequential():
    gen = SplitMix64(606)
    xs = [gen.next_below(1000) / 7.0 for _ in range(500)]
    whole = Welford()
    for x in xs:
        whole.add(x)
    left, right = Welford(), Welford()
    for x in xs[:123]:
        left.add(x)
    for x in xs[123:]:
        right.add(x)
    left.merge(right)
    assert left.count == whole.count
    assert abs(left.mean - whole.mean) < 1e-12
    assert abs(left.variance - whole.variance) < 1e-9
    assert left.min == whole.min and left.max == whole.max


def test_stderr_of_unit_variance_samples():
    """1e5 samples of a unit-variance uniform: stderr within 5% of 1/sqrt(N)."""
    gen = SplitMix64(808)
    scale = math.sqrt(12)  # uniform(0,1) variance is 1/12
    acc = Welford()
    for _ in range(100_000):
        acc.add(gen.next_u64() / 2.0 ** 64 * scale)
    expected = 1.0 / math.sqrt(100_000)
    assert abs(acc.stderr - expected) / expected < 0.05


def test_lis_bound_check_basics():
    import itertools
    assert max(lis_length(p) for p in itertools.permutations((1, 2, 3, 4))) == 4
    assert 4 <= math.e * 2  # whole-sequence maximum at n=4 stays under e*sqrt(n)
    rep = lis_bound_check(1000, 200, master_seed=17)
    assert rep.frac_exceeding == 0.0
    assert 1.0 < rep.mean_over_sqrt_n < math.e
    assert rep.max_lis <= rep.threshold
    with pytest.raises(ValueError):
        lis_bound_check(3, 10, 0)


def test_lis_ratio_stable_across_sizes():
    """mean LIS / sqrt(n) drifts slowly: within +/-10% across three decades."""
    ratios = [lis_bound_check(n, trials, master_seed=23).mean_over_sqrt_n
              for n, trials in ((10 ** 3, 200), (10 ** 4, 60), (10 ** 5, 15))]
    assert max(ratios) / min(ratios) < 1.2
    assert all(1.0 < r < math.e for r in ratios)
