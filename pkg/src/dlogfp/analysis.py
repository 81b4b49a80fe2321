"""Tallies of log_p|delta|, grouped-moment statistics and chi-squared fits."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

EDGES: Tuple[float, ...] = (0.0, 1 / 6, 1 / 3, 1 / 2, 2 / 3, 5 / 6, 1.0)
BUCKET_LABELS = ("0-1/6", "1/6-1/3", "1/3-1/2", "1/2-2/3", "2/3-5/6", "5/6-1")
MIDPOINTS = tuple((2 * j + 1) / 12 for j in range(6))

SIGN_FILTERS = ("non-negative", "negative", "all")
TRANSFORMS = ("identity", "exponential")

# smallest p-value we report as a number; below this we print a bound
P_VALUE_FLOOR = 1e-300


class InsufficientData(ValueError):
    pass


class DegenerateFit(ValueError):
    pass


@dataclass
class Histogram:
    counts: List[int] = field(default_factory=lambda: [0] * 6)
    zero_count: int = 0
    overflow_count: int = 0
    edges: Tuple[float, ...] = EDGES

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __add__(self, other: "Histogram") -> "Histogram":
        return Histogram(
            [a + b for a, b in zip(self.counts, other.counts)],
            self.zero_count + other.zero_count,
            self.overflow_count + other.overflow_count,
        )


@dataclass(frozen=True)
class GroupedStats:
    n: int
    mean: float
    std_dev: float
    skewness: float
    kurtosis: float


@dataclass(frozen=True)
class ChiSquaredResult:
    statistic: float
    dof: int
    p_value: float
    expected: Tuple[float, ...] = ()

    def p_value_text(self) -> str:
        return format_p_value(self.p_value)


def format_p_value(p: float) -> str:
    if p < P_VALUE_FLOOR:
        return "< 1e-300"
    return f"{p:.4e}"


def log_ratio(p: int, delta: int) -> Optional[float]:
    """log|delta| / log p, or None when delta is zero."""
    if delta == 0:
        return None
    return math.log(abs(delta)) / math.log(p)


def bucket_index(r: float) -> Optional[int]:
    """Bucket of a log-ratio; None if it lies above 1. Edge values go right."""
    if r > 1.0:
        return None
    if r < 0.0:
        # |delta| >= 1 always, so this is unreachable for real data
        raise ValueError(f"negative log ratio {r}")
    return min(bisect.bisect_right(EDGES, r) - 1, 5)


def passes_filter(d: int, sign_filter: str) -> bool:
    if sign_filter == "non-negative":
        return d >= 0
    if sign_filter == "negative":
        return d < 0
    if sign_filter == "all":
        return True
    raise ValueError(f"unknown sign filter {sign_filter!r}")


def tally(records: Iterable, sign_filter: str = "all") -> Histogram:
    """Bucket log_p|delta| for records having ``p`` and ``delta`` attributes."""
    h = Histogram()
    for rec in records:
        if not passes_filter(rec.delta, sign_filter):
            continue
        r = log_ratio(rec.p, rec.delta)
        if r is None:
            h.zero_count += 1
            continue
        j = bucket_index(r)
        if j is None:
            h.overflow_count += 1
        else:
            h.counts[j] += 1
    return h


def _weighted_moments(xs: Sequence[float], ws: Sequence[float]) -> GroupedStats:
    n = sum(ws)
    if n < 2:
        raise InsufficientData(f"need at least 2 observations, have {n}")
    mean = sum(w * x for x, w in zip(xs, ws)) / n
    dev = [x - mean for x in xs]
    s2 = sum(w * d**2 for d, w in zip(dev, ws))
    s3 = sum(w * d**3 for d, w in zip(dev, ws))
    s4 = sum(w * d**4 for d, w in zip(dev, ws))
    var = s2 / (n - 1)
    sd = math.sqrt(var)
    if var == 0:
        return GroupedStats(int(n), mean, 0.0, math.nan, math.nan)
    # every moment uses the n - 1 denominator and is scaled by the sample sd
    skew = s3 / (n - 1) / sd**3
    kurt = s4 / (n - 1) / var**2
    return GroupedStats(int(n), mean, sd, skew, kurt)


def _transform(transform: str):
    if transform == "identity":
        return lambda x: x
    if transform == "exponential":
        return math.exp
    raise ValueError(f"unknown transform {transform!r}")


def grouped_stats(h: Histogram, transform: str = "identity") -> GroupedStats:
    """Moments of the class midpoints weighted by bucket counts."""
    tf = _transform(transform)
    return _weighted_moments([tf(m) for m in MIDPOINTS], h.counts)


def raw_stats(values: Sequence[float]) -> GroupedStats:
    """Same moment conventions applied to unbinned values (not what the tables use)."""
    return _weighted_moments(list(values), [1] * len(values))


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def _gamma_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by its power series."""
    term = total = 1.0 / a
    ap = a
    for _ in range(10_000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by modified Lentz continued fraction."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < 1e-16:
            break
    log_pref = -x + a * math.log(x) - math.lgamma(a)
    return math.exp(log_pref) * h


def gammainc_upper(a: float, x: float) -> float:
    """Regularized upper incomplete gamma function Q(a, x)."""
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_cf(a, x)


def chi2_sf(statistic: float, dof: int) -> float:
    return gammainc_upper(dof / 2.0, statistic / 2.0)


def chi_squared_gof(h: Histogram, transform: str = "identity") -> ChiSquaredResult:
    """Pearson test of the bucket counts against a normal fitted by grouped moments.

    Outer buckets extend to -inf and +inf; two fitted parameters leave
    6 - 1 - 2 = 3 degrees of freedom.
    """
    st = grouped_stats(h, transform)
    if st.n < len(h.counts):
        raise DegenerateFit(f"{st.n} observations cannot fill {len(h.counts)} buckets")
    if st.std_dev == 0:
        raise DegenerateFit("zero spread; normal fit is degenerate")
    tf = _transform(transform)
    cuts = [normal_cdf((tf(e) - st.mean) / st.std_dev) for e in EDGES[1:-1]]
    cdf = [0.0] + cuts + [1.0]
    expected = [st.n * (b - a) for a, b in zip(cdf, cdf[1:])]
    if any(e <= 0 for e in expected):
        raise DegenerateFit("an expected bucket count is zero")
    stat = sum((o - e) ** 2 / e for o, e in zip(h.counts, expected))
    dof = len(h.counts) - 1 - 2
    return ChiSquaredResult(stat, dof, chi2_sf(stat, dof), tuple(expected))
