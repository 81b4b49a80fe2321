"""Counting fixed points of the discrete logarithm, g^h = h (mod p)."""

from .counting import (
    BoundReport,
    Condition,
    PrimeRecord,
    brute_force_count,
    build_record,
    count_F_any,
    count_F_pr_rppr,
    count_T,
)
from .numtheory import Factorization, factorize, prime_range

__version__ = "0.1.0"
