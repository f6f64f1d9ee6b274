"""Elementary exact number theory: factorization, primes, and the Jacobsthal function.

The Jacobsthal function g(d) is the smallest M such that every block of M
consecutive integers contains one coprime to d.  It is computed here by an
exact gap scan over one full period, which is what lets the explicit upper
bounds (Kanold, Stevens) be *verified* rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import CapExceededError, InternalCheckError, ValidationError

#: trial-division factorization is only supported up to this input size
FACTOR_LIMIT = 2 ** 64

#: constant from the least-prime-in-progression remark (informational only)
LINNIK_EXPONENT = 5.2


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer with its prime factorization cached.

    Invariants: factors are (prime, exponent) pairs sorted by prime, their
    product is value, omega counts distinct primes, radical is the squarefree
    product of the distinct primes.  value == 1 iff factors is empty.
    """

    value: int
    factors: tuple[tuple[int, int], ...]

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def radical(self) -> int:
        r = 1
        for p, _ in self.factors:
            r *= p
        return r

    def __int__(self) -> int:
        return self.value


@lru_cache(maxsize=1 << 17)
def factorize(n: int) -> FactoredInteger:
    """Trial-division factorization of n >= 1 (pure, memoized)."""
    if not isinstance(n, int) or n < 1:
        raise ValidationError("factorize requires a positive integer, got %r" % (n,))
    if n > FACTOR_LIMIT:
        raise CapExceededError(
            "factorize input exceeds the %d-bit configuration cap" % FACTOR_LIMIT.bit_length(),
            required=n,
        )
    m = n
    out = []
    for p in (2, 3, 5):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    # 30-wheel over the remaining candidates
    f = 7
    inc = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= m:
        if m % f == 0:
            e = 0
            while m % f == 0:
                m //= f
                e += 1
            out.append((f, e))
        f += inc[i]
        i = (i + 1) % 8
    if m > 1:
        out.append((m, 1))
    out.sort()
    return FactoredInteger(n, tuple(out))


def radical(n: int) -> int:
    return factorize(n).radical


# ---------------------------------------------------------------------------
# primes

_PRIMES: list[int] = [2, 3, 5, 7, 11, 13]
_SIEVE_LIMIT = 14

#: refuse to sieve past this many candidate integers
NTH_PRIME_SIEVE_CAP = 200_000_000


def _extend_sieve(limit: int) -> None:
    global _PRIMES, _SIEVE_LIMIT
    if limit <= _SIEVE_LIMIT:
        return
    if limit > NTH_PRIME_SIEVE_CAP:
        raise CapExceededError("prime sieve limit %d beyond cap" % limit, required=limit)
    sieve = bytearray(b"\x01") * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = b"\x00" * len(sieve[i * i :: i])
    _PRIMES = [i for i in range(limit + 1) if sieve[i]]
    _SIEVE_LIMIT = limit


def nth_prime(x: int) -> int:
    """The x-th prime, 1-indexed: nth_prime(1) == 2."""
    if not isinstance(x, int) or x < 1:
        raise ValidationError("nth_prime requires x >= 1, got %r" % (x,))
    while len(_PRIMES) < x:
        # p_x < x(ln x + ln ln x) for x >= 6; pad generously below that
        if x >= 6:
            bound = int(x * (math.log(x) + math.log(math.log(x)))) + 10
        else:
            bound = 15
        _extend_sieve(max(bound, 2 * _SIEVE_LIMIT))
    return _PRIMES[x - 1]


def rosser_upper(x: int) -> float:
    """Upper bound x*ln(x)*(1 + ln(ln(x))) for the x-th prime, valid for x >= 4.

    The value is nudged up by one ulp so that float rounding can never drop
    it below the true real number it approximates.
    """
    if not isinstance(x, int) or x < 4:
        raise ValidationError("rosser_upper requires x >= 4, got %r" % (x,))
    lx = math.log(x)
    v = x * lx * (1.0 + math.log(lx))
    return math.nextafter(v, math.inf)


# ---------------------------------------------------------------------------
# Jacobsthal


@lru_cache(maxsize=1 << 16)
def jacobsthal(d: int) -> int:
    """Smallest M such that any M consecutive integers contain one coprime to d.

    Exact: marks multiples of each prime divisor over one period 1..d and
    takes the maximal circular gap between coprime residues (pure, memoized).
    """
    if not isinstance(d, int) or d < 1:
        raise ValidationError("jacobsthal requires d >= 1, got %r" % (d,))
    if d == 1:
        return 1
    buf = bytearray(b"\x01") * d
    for p, _ in factorize(d).factors:
        buf[p - 1 :: p] = b"\x00" * (d // p)
    runs = bytes(buf).split(b"\x01")
    inner = max((len(r) for r in runs[1:-1]), default=0)
    circular = len(runs[0]) + len(runs[-1])
    return max(inner, circular) + 1


def jacobsthal_bounds(d) -> tuple[int, float | None]:
    """Kanold and Stevens upper bounds for g(d): (2^omega, 2*omega^(2+2e*ln omega)).

    The Stevens bound only makes sense for omega >= 2 (ln omega <= 0 below
    that); None is returned in its place.  Both floats carry a one-ulp upward
    guard.
    """
    fi = d if isinstance(d, FactoredInteger) else factorize(d)
    w = fi.omega
    kanold = 2 ** w
    if w < 2:
        return kanold, None
    stevens = 2.0 * w ** (2.0 + 2.0 * math.e * math.log(w))
    return kanold, math.nextafter(stevens, math.inf)


def squarefree_quotient(d: int, n: int) -> int:
    """Radical of d / gcd(d, n): the squarefree modulus left after removing n's share."""
    if d < 1 or n < 1:
        raise ValidationError("squarefree_quotient requires positive arguments")
    return radical(d // gcd(d, n))


def minimal_coprime_shift(a: int, n: int, d: int) -> int:
    """Least k >= 0 with gcd(a + k*n, d) == 1.

    Solvable exactly when a is invertible modulo gcd(n, d); the result is
    guaranteed to satisfy k < g(d') for d' the squarefree part of d/gcd(d,n).
    """
    if not isinstance(a, int) or a < 0:
        raise ValidationError("minimal_coprime_shift requires a >= 0")
    if n < 1 or d < 1:
        raise ValidationError("minimal_coprime_shift requires n, d >= 1")
    h = gcd(n, d)
    if gcd(a, h) != 1:
        raise ValidationError("no solution exists in this progression")
    limit = jacobsthal(squarefree_quotient(d, n))
    for k in range(limit):
        if gcd(a + k * n, d) == 1:
            return k
    raise InternalCheckError("coprime shift exceeded its g(d') bound; this is a bug")


def linnik_comparator(n: int, d) -> float:
    """Informational comparator n**5.2 * (omega(d) + 1); never asserted as a bound."""
    if n < 1:
        raise ValidationError("linnik_comparator requires n >= 1")
    fi = d if isinstance(d, FactoredInteger) else factorize(d)
    return n ** LINNIK_EXPONENT * (fi.omega + 1)
