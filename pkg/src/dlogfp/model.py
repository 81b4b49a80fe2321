"""Random model for the unconditioned count.

Each h in 1..p-1 contributes X_h = gcd(h, p-1) with probability 1/gcd(h, p-1)
and 0 otherwise, independently. The sum has mean p - 1 and variance
sum_{h} gcd(h, p-1) - (p - 1).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .numtheory import Factorization, InvalidInput, divisors, euler_phi, factor_of, gcd_sum

# Trials are drawn in fixed-size blocks, each with its own seed stream, so the
# samples do not depend on how blocks are spread over workers.
BLOCK_SIZE = 4096


@dataclass(frozen=True)
class ModelSummary:
    p: int
    mean: int
    variance: int

    @property
    def std_dev(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class SimulationResult:
    p: int
    trials: int
    seed: int
    empirical_mean: float
    empirical_variance: float
    samples_summary: Tuple[Tuple[int, int], ...]

    @property
    def standard_error(self) -> float:
        return math.sqrt(self.empirical_variance / self.trials)


def model_summary(p: int, f: Optional[Factorization] = None) -> ModelSummary:
    if p < 3:
        raise InvalidInput("p must be at least 3")
    f = f or factor_of(p - 1)
    return ModelSummary(p, p - 1, gcd_sum(f) - (p - 1))


def gcd_classes(p: int) -> List[Tuple[int, int]]:
    """(d, number of h in 1..p-1 with gcd(h, p-1) = d) for each d | p-1."""
    n = p - 1
    return [(d, euler_phi(factor_of(n // d))) for d in divisors(factor_of(n))]


def sample_F(p: int, rng: np.random.Generator) -> int:
    """One draw of sum X_h, one Bernoulli comparison per h."""
    n = p - 1
    g = np.gcd(np.arange(1, p, dtype=np.int64), n)
    hit = rng.random(n) < 1.0 / g
    return int(g[hit].sum())


def _block_samples(p: int, seed: int, block: int, size: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))
    total = np.zeros(size, dtype=np.int64)
    for d, count in gcd_classes(p):
        if d == 1:
            total += count
        else:
            total += d * rng.binomial(count, 1.0 / d, size=size)
    return total


def _block_job(args: Tuple[int, int, int, int]) -> np.ndarray:
    return _block_samples(*args)


def simulate_samples(p: int, trials: int, seed: int, workers: int = 1) -> np.ndarray:
    """Raw draws of sum X_h, in trial order. Identical for any ``workers``."""
    if trials < 1:
        raise InvalidInput("trials must be positive")
    jobs = []
    for block, start in enumerate(range(0, trials, BLOCK_SIZE)):
        jobs.append((p, seed, block, min(BLOCK_SIZE, trials - start)))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_block_job, jobs))
    else:
        parts = [_block_job(j) for j in jobs]
    return np.concatenate(parts)


def monte_carlo(p: int, trials: int, seed: int, workers: int = 1, bins: int = 20) -> SimulationResult:
    samples = simulate_samples(p, trials, seed, workers)
    # exact integer moments keep the result independent of summation order
    s1 = int(samples.sum())
    s2 = int((samples * samples).sum())
    mean = Fraction(s1, trials)
    var = Fraction(s2 - s1 * s1 / Fraction(trials), trials - 1) if trials > 1 else Fraction(0)
    errors = samples - (p - 1)
    lo, hi = int(errors.min()), int(errors.max())
    edges = np.unique(np.floor(np.linspace(lo, hi + 1, bins + 1)).astype(np.int64))
    counts, _ = np.histogram(errors, bins=edges)
    summary = tuple((int(e), int(c)) for e, c in zip(edges[:-1], counts))
    return SimulationResult(p, trials, seed, float(mean), float(var), summary)


def exact_distribution(p: int) -> Dict[int, Fraction]:
    """Exact law of sum X_h by convolving the per-class binomials."""
    dist = {0: Fraction(1)}
    for d, count in gcd_classes(p):
        q = Fraction(1, d)
        step = {
            d * k: math.comb(count, k) * q**k * (1 - q) ** (count - k)
            for k in range(count + 1)
            if q < 1 or k == count
        }
        new: Dict[int, Fraction] = {}
        for a, pa in dist.items():
            for b, pb in step.items():
                new[a + b] = new.get(a + b, Fraction(0)) + pa * pb
        dist = new
    return dist


def conjecture36_scan(records: Iterable, epsilon: float) -> Tuple[int, float, List[int]]:
    """Primes whose error |F_any - (p-1)| exceeds p^(1/2 + epsilon)."""
    if not epsilon > 0:
        raise InvalidInput("epsilon must be positive")
    records = list(records)
    offending = [r.p for r in records if abs(r.f_any - (r.p - 1)) > r.p ** (0.5 + epsilon)]
    frac = len(offending) / len(records) if records else 0.0
    return len(offending), frac, offending
