"""Counting-argument numerics and the statistics used to confront them.

The central quantity: an n-element, p-pass sorting run is described losslessly
by n*p nonnegative move counters summing to its total move count M. There are
C(M + np - 1, np - 1) ways to split M into np ordered summands, so runs with
M below the point where log2 of that count reaches log2(n!) - 4*log2(n)
cannot cover all inputs. Solving for that point gives a lower bound every
increment sequence's average move count must respect; it grows like
p * n^(1 + 1/p).

Binary logs throughout the external surface; lgamma works in nats inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .perms import lis_length, random_permutation
from .rng import Seed

_LN2 = math.log(2.0)


def log2_factorial(n: int) -> float:
    if n < 0:
        raise ValueError("n must be >= 0")
    return math.lgamma(n + 1) / _LN2


def log2_binomial(a: int, b: int) -> float:
    """log2 C(a, b) by exact log-gamma (no series truncation)."""
    if b < 0 or b > a:
        return float("-inf")
    return (math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)) / _LN2


def stirling_log2_binomial(a: int, b: int) -> float:
    """Cross-check expansion of log2 C(a, b):
    b*log(a/b) + (a-b)*log(a/(a-b)) + (1/2)*log(a/(b*(a-b))) - (1/2)*log(2*pi).

    First-order Stirling; the constant completes the expansion's O(1) tail.
    Relative agreement with the log-gamma value is within 0.1% once a >= 1e3
    and both b and a-b are at least ~a/100."""
    if b < 0 or b > a:
        return float("-inf")
    if b == 0 or b == a:
        return 0.0
    return (b * math.log2(a / b)
            + (a - b) * math.log2(a / (a - b))
            + 0.5 * math.log2(a / (b * (a - b)))
            - 0.5 * math.log2(2.0 * math.pi))


def log_divisions(M: int, parts: int) -> float:
    """log2 of the number of ways to split M into `parts` ordered nonnegative
    summands, i.e. log2 C(M + parts - 1, parts - 1)."""
    if M < 0:
        raise ValueError("M must be >= 0")
    if parts < 1:
        raise ValueError("parts must be >= 1")
    return log2_binomial(M + parts - 1, parts - 1)


@dataclass(frozen=True)
class BoundQuery:
    n: int
    p: int

    def __post_init__(self) -> None:
        if self.n < 2 or not 1 <= self.p < self.n:
            raise ValueError(f"need n >= 2 and 1 <= p < n, got n={self.n}, p={self.p}")


def description_threshold_bits(n: int) -> float:
    """log2(n!) - 4*log2(n): the description length a counter split must reach."""
    return log2_factorial(n) - 4.0 * math.log2(n)


def inversion_lower_bound(q: BoundQuery) -> int:
    """Smallest M whose counter splits reach the description threshold.

    log_divisions is nondecreasing in M, so binary search over [0, p*n^2]
    (no run moves more than p*n^2 times) finds the crossing exactly.
    """
    n, p = q.n, q.p
    target = description_threshold_bits(n)
    parts = n * p
    lo, hi = 0, p * n * n
    if log_divisions(hi, parts) < target:
        return hi  # cannot happen for p < n; kept as a guard
    while lo < hi:
        mid = (lo + hi) // 2
        if log_divisions(mid, parts) >= target:
            hi = mid
        else:
            lo = mid + 1
    return lo


def bound_ratio(q: BoundQuery) -> float:
    """M*(n,p) scaled by p * n^(1+1/p), the shape the bound is expected to track."""
    m_star = inversion_lower_bound(q)
    return m_star / (q.p * q.n ** (1.0 + 1.0 / q.p))


# ---------------------------------------------------------------------------
# power-law fitting and trial aggregation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FitPoint:
    n: int
    mean: float
    stderr: float | None = None
    trials: int | None = None


@dataclass(frozen=True)
class FitResult:
    exponent: float
    constant: float
    r_squared: float
    points: tuple[FitPoint, ...]
    rejected: tuple[FitPoint, ...] = ()


def fit_power_law(points) -> FitResult:
    """Ordinary least squares of log(mean) on log(n): mean ~ constant * n^exponent.

    Accepts (n, mean) or (n, mean, stderr, trials) tuples or FitPoints.
    Nonpositive means cannot be log-fitted; they are set aside and reported.
    """
    used: list[FitPoint] = []
    rejected: list[FitPoint] = []
    for item in points:
        pt = item if isinstance(item, FitPoint) else FitPoint(*item)
        (rejected if pt.mean <= 0 else used).append(pt)
    if len({pt.n for pt in used}) < 3:
        raise ValueError("need at least 3 distinct sizes with positive means")
    xs = [math.log(pt.n) for pt in used]
    ys = [math.log(pt.mean) for pt in used]
    m = len(xs)
    xbar = sum(xs) / m
    ybar = sum(ys) / m
    sxx = sum((x - xbar) ** 2 for x in xs)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    ss_res = sum((y - (slope * x + intercept)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - ybar) ** 2 for y in ys)
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return FitResult(
        exponent=slope,
        constant=math.exp(intercept),
        r_squared=r2,
        points=tuple(used),
        rejected=tuple(rejected),
    )


@dataclass
class Welford:
    """Numerically stable streaming mean/variance with an exact merge."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    min: float = field(default=math.inf)
    max: float = field(default=-math.inf)

    def add(self, x: float) -> None:
        self.count += 1
        d = x - self.mean
        self.mean += d / self.count
        self.m2 += d * (x - self.mean)
        if x < self.min:
            self.min = x
        if x > self.max:
            self.max = x

    def merge(self, other: "Welford") -> "Welford":
        if other.count == 0:
            return self
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean, other.m2
            self.min, self.max = other.min, other.max
            return self
        total = self.count + other.count
        d = other.mean - self.mean
        self.m2 += other.m2 + d * d * self.count * other.count / total
        self.mean += d * other.count / total
        self.count = total
        self.min = min(self.min, other.min)
        self.max = max(self.max, other.max)
        return self

    @property
    def variance(self) -> float | None:
        if self.count < 2:
            return None
        return self.m2 / (self.count - 1)

    @property
    def stderr(self) -> float | None:
        v = self.variance
        if v is None:
            return None
        return math.sqrt(v / self.count)

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "stderr": self.stderr,
            "min": self.min,
            "max": self.max,
        }


def summarize_trials(records, metric: str) -> dict[tuple, Welford]:
    """Group records by (n, p, family) and accumulate one metric per group.

    Records need n/p/family attributes and a metrics mapping; groups where
    the metric is absent are skipped, an empty record list is an error.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple, Welford] = {}
    for r in records:
        value = r.metrics.get(metric)
        if value is None:
            continue
        key = (r.n, r.p, r.family)
        acc = groups.get(key)
        if acc is None:
            acc = groups[key] = Welford()
        acc.add(value)
    if not groups:
        raise ValueError(f"metric {metric!r} appears in no record")
    return groups


# ---------------------------------------------------------------------------
# increasing-subsequence length vs e*sqrt(n)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LisBoundReport:
    n: int
    trials: int
    mean_lis: float
    max_lis: int
    mean_over_sqrt_n: float
    threshold: float  # e * sqrt(n)
    frac_exceeding: float


def lis_bound_check(n: int, trials: int, master_seed: int) -> LisBoundReport:
    """Sample LIS lengths of uniform permutations against the e*sqrt(n) envelope."""
    if n < 4:
        raise ValueError("n must be >= 4")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    threshold = math.e * math.sqrt(n)
    acc = Welford()
    exceeding = 0
    max_lis = 0
    for t in range(trials):
        length = lis_length(random_permutation(n, Seed(master_seed, t)))
        acc.add(length)
        if length > threshold:
            exceeding += 1
        if length > max_lis:
            max_lis = length
    return LisBoundReport(
        n=n,
        trials=trials,
        mean_lis=acc.mean,
        max_lis=max_lis,
        mean_over_sqrt_n=acc.mean / math.sqrt(n),
        threshold=threshold,
        frac_exceeding=exceeding / trials,
    )
