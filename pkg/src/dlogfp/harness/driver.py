"""Parallel per-prime computation."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import List, Optional

from ..counting import Condition, PrimeRecord, annotate_bounds, brute_force_count, build_record
from ..model import model_summary
from ..numtheory import prime_range
from .results import ResultRow, write_results

PAPER_LO = 3
PAPER_HI = 15413
PAPER_PRIME_COUNT = 1800


class OracleMismatch(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    prime_lo: int = PAPER_LO
    prime_hi: int = PAPER_HI
    workers: int = os.cpu_count() or 1
    oracle_limit: int = 211
    epsilon: float = 0.1
    trials: int = 100_000
    seed: int = 42
    output_dir: str = "results"

    def __post_init__(self) -> None:
        if not 3 <= self.prime_lo <= self.prime_hi:
            raise ValueError(f"need 3 <= from <= to, got [{self.prime_lo}, {self.prime_hi}]")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @classmethod
    def from_file(cls, path, **overrides) -> "ExperimentConfig":
        """JSON config; keyword overrides that are not None win."""
        data = json.loads(Path(path).read_text()) if path else {}
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)


def compute_prime(p: int, oracle_limit: int = 0) -> PrimeRecord:
    rec = annotate_bounds(build_record(p))
    rec.model_variance = model_summary(p).variance
    if p <= oracle_limit:
        for gc, hc, got in (
            (Condition.ANY, Condition.ANY, rec.f_any),
            (Condition.PR, Condition.RPPR, rec.f_pr_rppr),
        ):
            want = brute_force_count(p, gc, hc)
            if got != want:
                raise OracleMismatch(
                    f"p={p}: {gc.value}x{hc.value} count {got} but brute force gives {want}"
                )
    return rec


def _job(args) -> PrimeRecord:
    return compute_prime(*args)


def compute_records(
    lo: int, hi: int, workers: int = 1, oracle_limit: int = 0
) -> List[PrimeRecord]:
    """Records for every prime in [lo, hi], ascending in p whatever ``workers`` is."""
    primes = prime_range(max(lo, 3), hi)
    # largest first so the expensive primes do not straggle at the end
    jobs = [(p, oracle_limit) for p in reversed(primes)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            out = list(ex.map(_job, jobs, chunksize=4))
    else:
        out = [_job(j) for j in jobs]
    out.sort(key=lambda r: r.p)
    return out


@dataclass
class ComputeSummary:
    path: Path
    primes: int
    seconds: float

    @property
    def rate(self) -> float:
        return self.primes / self.seconds if self.seconds > 0 else float("inf")


def run_compute(config: ExperimentConfig) -> ComputeSummary:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    records = compute_records(config.prime_lo, config.prime_hi, config.workers, config.oracle_limit)
    path = out / "results.csv"
    write_results(path, (ResultRow.from_record(r) for r in records))
    return ComputeSummary(path, len(records), time.perf_counter() - t0)
