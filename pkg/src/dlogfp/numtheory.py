"""Integer arithmetic primitives and multiplicative arithmetic functions.

Everything here is a pure function of its arguments; the counting layer
calls these from worker processes without any coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, List, Tuple


class InvalidModulus(ValueError):
    pass


class NotInvertible(ValueError):
    pass


class InvalidInput(ValueError):
    pass


class InvalidDivisor(ValueError):
    pass


class InvalidElement(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic trial division; fine for the n < 2**31 used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    i = 5
    while i * i <= n:
        if n % i == 0 or n % (i + 2) == 0:
            return False
        i += 6
    return True


@dataclass(frozen=True)
class Factorization:
    """A positive integer together with its prime-power decomposition."""

    n: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        last = 1
        for q, k in self.factors:
            if q <= last or k < 1 or not is_prime(q):
                raise InvalidInput(f"bad factor list {self.factors!r}")
            prod *= q**k
            last = q
        if prod != self.n:
            raise InvalidInput(f"factors multiply to {prod}, not {self.n}")

    @property
    def primes(self) -> List[int]:
        return [q for q, _ in self.factors]

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.factors)


def pow_mod(base: int, exp: int, modulus: int) -> int:
    if modulus < 2:
        raise InvalidModulus(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise InvalidInput("negative exponent")
    return pow(base, exp, modulus)


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)


def inverse_mod(a: int, m: int) -> int:
    """Return x in [1, m) with a*x = 1 (mod m)."""
    if m < 2:
        raise InvalidModulus(f"modulus must be >= 2, got {m}")
    if math.gcd(a, m) != 1:
        raise NotInvertible(f"{a} has no inverse modulo {m}")
    return pow(a, -1, m)


def factorize(n: int) -> Factorization:
    if n < 2:
        raise InvalidInput(f"cannot factor {n}")
    factors = []
    m = n
    q = 2
    while q * q <= m:
        if m % q == 0:
            k = 0
            while m % q == 0:
                m //= q
                k += 1
            factors.append((q, k))
        q += 1 if q == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return Factorization(n, tuple(factors))


def factor_of(n: int) -> Factorization:
    """Like factorize, but also accepts n = 1 (empty factor list)."""
    if n == 1:
        return Factorization(1, ())
    return factorize(n)


def divisors(f: Factorization) -> List[int]:
    divs = [1]
    for q, k in f.factors:
        divs = [d * q**i for d in divs for i in range(k + 1)]
    return sorted(divs)


def euler_phi(f: Factorization) -> int:
    result = 1
    for q, k in f.factors:
        result *= (q - 1) * q ** (k - 1)
    return result


def divisor_count(f: Factorization) -> int:
    return math.prod(k + 1 for _, k in f.factors)


def divisor_sum(f: Factorization) -> int:
    return math.prod((q ** (k + 1) - 1) // (q - 1) for q, k in f.factors)


def gcd_sum(f: Factorization) -> int:
    """Pillai's function: sum of gcd(h, n) for h = 1..n.

    Multiplicative, with value (k+1) q^k - k q^(k-1) at a prime power q^k.
    """
    return math.prod((k + 1) * q**k - k * q ** (k - 1) for q, k in f.factors)


def multiplicative_order(x: int, p: int, f: Factorization) -> int:
    """Order of x modulo p, found by stripping prime factors from p - 1."""
    if x % p == 0:
        raise InvalidElement(f"{x} is not a unit modulo {p}")
    order = p - 1
    for q, k in f.factors:
        for _ in range(k):
            if pow(x, order // q, p) == 1:
                order //= q
            else:
                break
    return order


def is_primitive_root(x: int, p: int, f: Factorization) -> bool:
    if x % p == 0:
        return False
    return all(pow(x, (p - 1) // q, p) != 1 for q in f.primes)


def is_eth_power(h: int, e: int, p: int) -> bool:
    if e < 1 or (p - 1) % e:
        raise InvalidDivisor(f"{e} does not divide {p - 1}")
    return pow(h, (p - 1) // e, p) == 1


def prime_range(lo: int, hi: int) -> List[int]:
    """Primes in the closed interval [lo, hi], by sieve of Eratosthenes."""
    if hi < 2 or hi < lo:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(hi) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, hi + 1, i)))
    return [i for i in range(max(lo, 2), hi + 1) if sieve[i]]
