"""Exact counts of solutions to g^h = h (mod p) and checks of the known bounds.

Counts range over 1 <= g, h <= p - 1. The unconditioned count is built from
the per-divisor tallies T(e, p): the number of h with gcd(h, p - 1) = e that
are e-th power residues modulo p. Each such h admits exactly e bases g.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .numtheory import (
    Factorization,
    InvalidDivisor,
    InvalidInput,
    divisor_count,
    divisors,
    divisor_sum,
    euler_phi,
    factor_of,
    factorize,
    multiplicative_order,
)


class Condition(str, enum.Enum):
    ANY = "ANY"
    PR = "PR"
    RP = "RP"
    RPPR = "RPPR"


class InvariantViolation(AssertionError):
    """A proved identity or bound failed; always an implementation bug."""


@dataclass
class PrimeRecord:
    p: int
    phi_p1: int
    d_p1: int
    sigma_p1: int
    t_values: Dict[int, int]
    f_any: int
    f_pr_rppr: int
    delta: int
    model_variance: int = 0
    log_ratio: Optional[float] = None
    cz_ok: bool = True
    prop42_ok: bool = True
    thm48_ok: bool = True


@dataclass
class BoundReport:
    p: int
    bound_name: str
    lhs: float
    rhs: float
    context: Optional[Tuple[int, int, int]] = None
    satisfied: bool = field(init=False)

    def __post_init__(self) -> None:
        self.satisfied = self.lhs <= self.rhs


def _check_divisor(e: int, p: int) -> None:
    if e < 1 or (p - 1) % e:
        raise InvalidDivisor(f"{e} does not divide {p - 1}")


def _sqrt_log(p: int, shift: float = 1.0) -> float:
    return math.sqrt(p) * (shift + math.log(p))


def count_T(e: int, p: int, f: Optional[Factorization] = None) -> int:
    _check_divisor(e, p)
    n = p - 1
    m = n // e
    # h = e*k with gcd(k, m) = 1
    return sum(
        1
        for k in range(1, m + 1)
        if math.gcd(k, m) == 1 and pow(e * k, m, p) == 1
    )


def t_table(p: int, f: Optional[Factorization] = None) -> Dict[int, int]:
    """T(e, p) for every divisor e of p - 1, in one pass over h."""
    n = p - 1
    f = f or factor_of(n)
    table = dict.fromkeys(divisors(f), 0)
    gcd = math.gcd
    for h in range(1, p):
        e = gcd(h, n)
        if pow(h, n // e, p) == 1:
            table[e] += 1
    return table


def count_F_any(p: int, f: Optional[Factorization] = None) -> int:
    return sum(e * t for e, t in t_table(p, f).items())


def count_F_pr_rppr(p: int, f: Optional[Factorization] = None) -> int:
    n = p - 1
    f = f or factor_of(n)
    qs = f.primes
    count = 0
    for h in range(1, p):
        if math.gcd(h, n) == 1 and all(pow(h, n // q, p) != 1 for q in qs):
            count += 1
    return count


def _condition_mask(p: int, cond: Condition) -> List[bool]:
    n = p - 1
    qs = factor_of(n).primes
    mask = [False] * p
    for x in range(1, p):
        rp = math.gcd(x, n) == 1
        if cond in (Condition.PR, Condition.RPPR):
            pr = all(pow(x, n // q, p) != 1 for q in qs)
        else:
            pr = True
        if cond is Condition.ANY:
            mask[x] = True
        elif cond is Condition.RP:
            mask[x] = rp
        elif cond is Condition.PR:
            mask[x] = pr
        else:
            mask[x] = rp and pr
    return mask


def brute_force_count(
    p: int, g_condition: Condition | str = Condition.ANY, h_condition: Condition | str = Condition.ANY
) -> int:
    """Count pairs (g, h) with g^h = h (mod p) by exhausting all (p - 1)^2 pairs."""
    if p < 3:
        raise InvalidInput("p must be at least 3")
    gmask = _condition_mask(p, Condition(g_condition))
    hmask = _condition_mask(p, Condition(h_condition))
    count = 0
    for g in range(1, p):
        if not gmask[g]:
            continue
        power = 1
        for h in range(1, p):
            power = power * g % p
            if power == h and hmask[h]:
                count += 1
    return count


def delta(record: PrimeRecord) -> int:
    return record.f_any - (record.p - 3)


def build_record(p: int) -> PrimeRecord:
    """Compute every counted quantity for one prime."""
    if p < 3:
        raise InvalidInput("p must be at least 3")
    f = factorize(p - 1)
    t = t_table(p, f)
    f_any = sum(e * v for e, v in t.items())
    rec = PrimeRecord(
        p=p,
        phi_p1=euler_phi(f),
        d_p1=divisor_count(f),
        sigma_p1=divisor_sum(f),
        t_values=t,
        f_any=f_any,
        f_pr_rppr=count_F_pr_rppr(p, f),
        delta=f_any - (p - 3),
    )
    if rec.delta:
        rec.log_ratio = math.log(abs(rec.delta)) / math.log(p)
    return rec


def check_cz_bound(record: PrimeRecord) -> BoundReport:
    p = record.p
    main = record.phi_p1**2 / (p - 1)
    return BoundReport(
        p,
        "cz_theorem",
        abs(record.f_pr_rppr - main),
        record.d_p1**2 * _sqrt_log(p),
    )


def prop42_exact_failures(record: PrimeRecord) -> List[str]:
    """Exact identities T(1,p) = phi(p-1), T(p-1,p) = T((p-1)/2,p) = 0 and
    0 <= T(e,p) <= phi((p-1)/e). Returns a description per failure."""
    p, t = record.p, record.t_values
    n = p - 1
    bad = []
    if t.get(1) != record.phi_p1:
        bad.append(f"T(1,{p}) = {t.get(1)} != phi(p-1) = {record.phi_p1}")
    if t.get(n) != 0:
        bad.append(f"T({n},{p}) = {t.get(n)} != 0")
    if n % 2 == 0 and t.get(n // 2) != 0:
        bad.append(f"T({n // 2},{p}) = {t.get(n // 2)} != 0")
    for e, v in t.items():
        cap = euler_phi(factor_of(n // e))
        if not 0 <= v <= cap:
            bad.append(f"T({e},{p}) = {v} outside [0, {cap}]")
    return bad


def check_prop42(record: PrimeRecord) -> List[BoundReport]:
    """Per-divisor T(e,p) bounds plus the F_any bound around p - 3.

    Raises InvariantViolation if any of the exact identities fail.
    """
    bad = prop42_exact_failures(record)
    if bad:
        raise InvariantViolation("; ".join(bad))
    p = record.p
    n = p - 1
    scale = _sqrt_log(p)
    reports = []
    for e, v in sorted(record.t_values.items()):
        cof = factor_of(n // e)
        reports.append(
            BoundReport(
                p,
                "prop42_part1",
                abs(v - euler_phi(cof) / e),
                divisor_count(cof) * scale,
                context=(e, 0, 0),
            )
        )
    reports.append(check_prop42_part5(record))
    return reports


def check_prop42_part5(record) -> BoundReport:
    """The F_any bound around p - 3; needs only f_any, d_p1 and sigma_p1."""
    p = record.p
    return BoundReport(
        p,
        "prop42_part5",
        abs(record.f_any - (p - 3)),
        record.d_p1 * (record.sigma_p1 - 1.5 * (p - 1)) * _sqrt_log(p),
    )


def gcd_order_counts(p: int, N: Optional[int] = None) -> Counter:
    """Counter of (gcd(x, p-1), ord_p(x)) over x = 1..N, skipping x = 0 mod p."""
    n = p - 1
    N = n if N is None else N
    f = factor_of(n)
    order = [0] + [multiplicative_order(x, p, f) for x in range(1, p)]
    counts: Counter = Counter()
    for x in range(1, N + 1):
        r = x % p
        if r:
            counts[math.gcd(x, n), order[r]] += 1
    return counts


def check_lemma27(
    p: int, e: int, f_div: int, N: int, counts: Optional[Counter] = None
) -> BoundReport:
    """Joint gcd/order count over 1..N against its product-of-densities estimate.

    ``counts`` may be a precomputed gcd_order_counts(p, N) to amortize the
    order computations across many (e, f) pairs.
    """
    n = p - 1
    if e < 1 or f_div < 1 or n % e or n % f_div or N < 1 or N % n:
        raise InvalidInput(f"need e, f | {n} and {n} | N; got e={e}, f={f_div}, N={N}")
    if counts is None:
        counts = gcd_order_counts(p, N)
    observed = counts.get((e, n // f_div), 0)
    fe, ff = factor_of(n // e), factor_of(n // f_div)
    expected = N * euler_phi(ff) * euler_phi(fe) / n**2
    return BoundReport(
        p,
        "lemma27",
        abs(observed - expected),
        divisor_count(ff) * divisor_count(fe) * _sqrt_log(p),
        context=(e, f_div, N),
    )


def check_thm48(record: PrimeRecord) -> BoundReport:
    p = record.p
    return BoundReport(
        p,
        "thm48",
        abs(record.f_any - (p - 1)),
        p**0.8313 * record.d_p1**2 * (2 + math.log(p)),
    )


def annotate_bounds(record: PrimeRecord) -> PrimeRecord:
    """Fill the cz_ok / prop42_ok / thm48_ok flags of a record in place."""
    record.cz_ok = check_cz_bound(record).satisfied
    try:
        record.prop42_ok = all(r.satisfied for r in check_prop42(record))
    except InvariantViolation:
        record.prop42_ok = False
    record.thm48_ok = check_thm48(record).satisfied
    return record
