"""Independent oracles used by the test suite.

These deliberately recompute everything from definitions with different
algorithms than the library (gcd scans instead of factor sieves, a fresh
Eratosthenes sieve instead of the cached incremental one), so agreement is
meaningful.
"""

from __future__ import annotations

import math
from math import gcd

import numpy as np


def jacobsthal_by_definition(d: int) -> int:
    """Smallest M such that every window of M consecutive integers in
    [1, d + M] contains an integer coprime to d, straight from the quantifiers.

    For each window start x the window [x, x + M - 1] contains a coprime iff
    the distance from x to the next coprime is < M; window starts repeat with
    period d, so x ranges over one period.
    """
    if d == 1:
        return 1
    n = 2 * d + 1
    ar = np.gcd(np.arange(1, n + 1, dtype=np.int64), d)
    pos = np.where(ar == 1, np.arange(n), np.int64(1) << 40)
    next_coprime = np.minimum.accumulate(pos[::-1])[::-1]
    dist = next_coprime[: d + 1] - np.arange(d + 1)
    return int(dist.max()) + 1


def sieve_upto(limit: int) -> list[int]:
    """All primes <= limit by a plain sieve (independent of the library cache)."""
    if limit < 2:
        return []
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return [int(i) for i in np.flatnonzero(flags)]


def nth_prime_by_sieve(x: int, _cache: dict = {}) -> int:
    """x-th prime from a fresh sieve, growing the bound until enough appear."""
    if "primes" not in _cache:
        _cache["primes"] = sieve_upto(1000)
        _cache["limit"] = 1000
    while len(_cache["primes"]) < x:
        _cache["limit"] *= 2
        _cache["primes"] = sieve_upto(_cache["limit"])
    return _cache["primes"][x - 1]


def brute_min_coprime_shift(a: int, n: int, d: int, k_max: int = 10 ** 6):
    """Scan k = 0, 1, ... directly; None if no k below k_max works."""
    for k in range(k_max):
        if gcd(a + k * n, d) == 1:
            return k
    return None


def omega_by_gcd(d: int) -> int:
    """Count distinct primes of d by repeated gcd stripping (no factor list)."""
    count = 0
    m = d
    p = 2
    while p * p <= m:
        if m % p == 0:
            count += 1
            while m % p == 0:
                m //= p
        p += 1
    return count + (1 if m > 1 else 0)
