"""Explicit constants for the torsion-coset order threshold.

Everything flows from one degree-growth function

    f(D, d) = D^2 * (p(x)^c * g(d * max(1, p)))^(2*c*Delta),
    x = ceil(D^(1/4c)) + D + omega(d) + 1,

its iterates, the exponent pair (delta, delta') derived from them, and the
final sufficiency threshold for the coset order: every d above the threshold
satisfies

    d >= (omega(d)+1)^delta * (2*g(d))^delta'   and
    d >= D^delta * (2*g(d))^delta',

with g bounded by its Kanold form 2^omega.  The threshold returned by
``final_delta`` is *certified*: a primorial-growth argument bounds where
violations of the Kanold-form system can live, the region below a scan cap is
searched exhaustively, and the closed-form comparator is folded in by max.

All authoritative values are exact integers or Fractions; floats appear only
in advisory report fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import CapExceededError, ValidationError
from .integers import FactoredInteger, factorize, jacobsthal, nth_prime
from .linalg import ceil_root, ceil_root_fraction, lcm

#: nth_prime is evaluated exactly up to this index; past it, iterated bounds
#: substitute the certified Rosser ceiling (always >= the true prime).
EXACT_PRIME_INDEX_CAP = 10 ** 6

#: explicit set enumeration refuses to materialize more candidates than this
SIGMA_ENUMERATION_CAP = 10 ** 6

#: primorial tail scans give up after this many primes
TAIL_K_CAP = 10 ** 5

#: certified thresholds larger than this many bits are refused
THRESHOLD_BIT_BUDGET = 2 ** 21


@dataclass(frozen=True)
class BoundParams:
    """Inputs the threshold depends on.

    D: degree of the subvariety; Delta: its dimension; c: homothety-power
    exponent; d: order of the torsion coset; p: residue characteristic
    (0 for characteristic zero); eps_slack: the epsilon absorbed into the
    exponent constants (1/2 always suffices); alpha/beta: a power-form pair
    dominating the Kanold bound, alpha * w^beta >= 2^w on 1..omega_range.
    """

    D: int
    Delta: int
    c: int
    d: int = 1
    p: int = 0
    eps_slack: Fraction = Fraction(1, 2)
    alpha: Fraction = Fraction(2)
    beta: Fraction = Fraction(8)
    omega_range: int = 40
    linear_x: bool = False

    def __post_init__(self):
        if self.D < 1 or self.c < 1 or self.d < 1:
            raise ValidationError("BoundParams requires D, c, d >= 1")
        if self.Delta < 0 or self.p < 0:
            raise ValidationError("BoundParams requires Delta, p >= 0")
        if self.p:
            fp = factorize(self.p)
            if fp.factors != ((self.p, 1),):
                raise ValidationError(
                    "p must be 0 or a prime (a residue characteristic), got %d" % self.p
                )
        object.__setattr__(self, "eps_slack", Fraction(self.eps_slack))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.eps_slack <= 0:
            raise ValidationError("eps_slack must be positive")
        if self.alpha <= 0 or self.beta <= 0:
            raise ValidationError("alpha, beta must be positive")
        # alpha * w^beta >= 2^w on the configured range, checked exactly
        bden = self.beta.denominator
        for w in range(1, self.omega_range + 1):
            lhs = self.alpha ** bden * Fraction(w) ** self.beta.numerator
            rhs = Fraction(2) ** (w * bden)
            if lhs < rhs:
                raise ValidationError(
                    "alpha*omega^beta fails to dominate 2^omega at omega=%d" % w
                )

    @property
    def d_factored(self) -> FactoredInteger:
        return factorize(self.d)


def x_value(params: BoundParams) -> int:
    """x = ceil(D^(1/4c)) + D + omega(d) + 1 (or the linear variant 2D + omega(d) + 1)."""
    w = params.d_factored.omega
    if params.linear_x:
        return 2 * params.D + w + 1
    return ceil_root(params.D, 4 * params.c) + params.D + w + 1


def _g_arg(params: BoundParams) -> int:
    return params.d * max(1, params.p)


def capital_n(params: BoundParams) -> int:
    """N = p(x)^c * g(d * max(1, p))."""
    return nth_prime(x_value(params)) ** params.c * jacobsthal(_g_arg(params))


def sigma_set(params: BoundParams, cap: int = SIGMA_ENUMERATION_CAP) -> list[int]:
    """The set {m^c : 1 <= m <= N, gcd(m, d) = 1, p does not divide m}, sorted."""
    n_cap = capital_n(params)
    if n_cap > cap:
        raise CapExceededError(
            "sigma_set needs to enumerate up to N=%d (cap %d)" % (n_cap, cap),
            required=n_cap,
        )
    out = []
    for m in range(1, n_cap + 1):
        if gcd(m, params.d) != 1:
            continue
        if params.p > 0 and m % params.p == 0:
            continue
        out.append(m ** params.c)
    return out


def sigma_size(params: BoundParams) -> int:
    """|Sigma| without enumeration: inclusion-exclusion over the squarefree
    divisors of rad(d) (and p when positive)."""
    n_cap = capital_n(params)
    primes = [p for p, _ in params.d_factored.factors]
    if params.p > 0 and params.p not in primes:
        primes.append(params.p)
    total = 0
    for mask in range(1 << len(primes)):
        e = 1
        bits = 0
        for i, p in enumerate(primes):
            if mask >> i & 1:
                e *= p
                bits += 1
        total += (-1) ** bits * (n_cap // e)
    return total


def f_bound(params: BoundParams) -> int:
    """f(D, d) = D^2 * N^(2*c*Delta), evaluated exactly."""
    return params.D ** 2 * capital_n(params) ** (2 * params.c * params.Delta)


def _prime_upper(x: int) -> int:
    """Certified integer >= the x-th prime, for x too large to sieve.

    Uses ceil(x * L) with L a float upper bound on ln(x)(1 + ln ln x); the
    float is padded before the exact Fraction multiply so rounding can only
    push the bound up.
    """
    lx = math.log(x)
    factor = lx * (1.0 + math.log(lx)) * (1.0 + 2.0 ** -40)
    v = Fraction(factor) * x
    return -((-v.numerator) // v.denominator)


def _nth_prime_or_upper(x: int, exact_cap: int = EXACT_PRIME_INDEX_CAP) -> int:
    if x <= exact_cap:
        return nth_prime(x)
    return _prime_upper(x)


def iterated_f(params: BoundParams, i: int, exact_cap: int = EXACT_PRIME_INDEX_CAP) -> int:
    """f_i(D): f_0 = D, f_{i+1} = f(f_i, d), with d held fixed.

    Past the exact sieve range the prime lookup falls back to the certified
    Rosser ceiling, which keeps every value an upper bound and keeps the
    sequence non-decreasing.
    """
    if i < 0 or i > params.Delta:
        raise ValidationError("iterate index must satisfy 0 <= i <= Delta")
    w = params.d_factored.omega
    g = jacobsthal(_g_arg(params))
    val = params.D
    for _ in range(i):
        if params.linear_x:
            x = 2 * val + w + 1
        else:
            x = ceil_root(val, 4 * params.c) + val + w + 1
        n = _nth_prime_or_upper(x, exact_cap)
        val = val ** 2 * (n ** params.c * g) ** (2 * params.c * params.Delta)
    return val


def exponent_constants(Delta: int, c: int, eps) -> tuple[Fraction, Fraction, Fraction]:
    """(lambda, delta, delta') = (c^2*(Delta^2-Delta)/2*(1+eps), 2^Delta*(1+lambda), 2^Delta*lambda/c)."""
    if Delta < 0 or c < 1:
        raise ValidationError("exponent_constants requires Delta >= 0, c >= 1")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValidationError("eps must be positive")
    lam = Fraction(c ** 2) * Fraction(Delta ** 2 - Delta, 2) * (1 + eps)
    delta = Fraction(2) ** Delta * (1 + lam)
    delta_prime = Fraction(2) ** Delta * lam / c
    return lam, delta, delta_prime


def _ceil_power_product(bases_exps: list[tuple[Fraction, Fraction]]) -> int:
    """Exact ceiling of a product of positive rational powers prod b_i^{e_i}."""
    L = 1
    for _, e in bases_exps:
        L = lcm(L, e.denominator)
    prod = Fraction(1)
    for b, e in bases_exps:
        prod *= Fraction(b) ** int(e * L)
    return ceil_root_fraction(prod.numerator, prod.denominator, L)


def closed_form_threshold(params: BoundParams) -> int:
    """Ceiling of max{a'*b'^{b'}, a'^{b'/(b'-1)} * D^{delta*b'/(b'-1)}} with
    a' = alpha^{delta'} and b' = delta'*beta + delta."""
    _, delta, delta_prime = exponent_constants(params.Delta, params.c, params.eps_slack)
    if params.Delta == 0:
        return 1
    beta_prime = delta_prime * params.beta + delta
    if beta_prime <= 1:
        raise ValidationError("closed form needs beta' > 1 (holds for Delta >= 1)")
    term1 = _ceil_power_product(
        [(params.alpha, delta_prime), (beta_prime, beta_prime)]
    )
    ratio = beta_prime / (beta_prime - 1)
    term2 = _ceil_power_product(
        [(params.alpha, delta_prime * ratio), (Fraction(params.D), delta * ratio)]
    )
    return max(term1, term2)


def _kanold_rhs_powL(k: int, D: int, delta: Fraction, delta_prime: Fraction, L: int) -> int:
    """R_k^L where R_k = max(k+1, D)^delta * 2^((k+1)*delta') bounds the
    right-hand side of both inequalities for any d with omega(d) = k."""
    A = max(k + 1, D)
    return A ** int(delta * L) * 2 ** int((k + 1) * delta_prime * L)


def _violation_region(params: BoundParams, tail_k_cap: int, bit_budget: int):
    """All omega-classes where the Kanold-form system can fail.

    Returns (upper, rhs_by_omega, L): ``upper`` is a certified integer above
    every violating d (1 if none exist); violations with omega(d) = k require
    primorial(k) <= d < R_k, and once primorials outgrow R_k they stay ahead
    because consecutive-prime ratios beat the R-ratio 2^delta' * e.
    """
    _, delta, delta_prime = exponent_constants(params.Delta, params.c, params.eps_slack)
    L = lcm(delta.denominator, delta_prime.denominator)
    dp_ceil = -(-delta_prime.numerator // delta_prime.denominator)
    prime_floor = 3 * 2 ** dp_ceil  # >= e * 2^delta', locks the induction
    upper = 1
    rhs = []
    primorial = 1
    k = 0
    while True:
        R_L = _kanold_rhs_powL(k, params.D, delta, delta_prime, L)
        if R_L.bit_length() > bit_budget * L:
            raise CapExceededError(
                "threshold certificate exceeds the %d-bit budget" % bit_budget
            )
        rhs.append(R_L)
        if primorial ** L < R_L:
            upper = max(upper, ceil_root_fraction(R_L, 1, L))
        elif k + 1 >= delta and nth_prime(k + 1) >= prime_floor:
            break
        if k >= tail_k_cap:
            raise CapExceededError(
                "primorial tail scan exceeded %d primes" % tail_k_cap, required=k
            )
        k += 1
        primorial *= nth_prime(k)
    return upper, rhs, L


def final_delta(
    params: BoundParams,
    scan_cap: int = 10 ** 6,
    tail_k_cap: int = TAIL_K_CAP,
    bit_budget: int = THRESHOLD_BIT_BUDGET,
) -> int:
    """A verified order threshold: every d at or above it satisfies both
    Kanold-form inequalities, and the closed-form comparator is folded in.

    When the certified violation region fits under ``scan_cap`` the region is
    scanned exhaustively and the threshold is the exact minimal one; otherwise
    the certificate's upper end is used directly (sufficient, not minimal).
    """
    if params.Delta == 0:
        return 1
    upper, rhs, L = _violation_region(params, tail_k_cap, bit_budget)
    if upper <= scan_cap:
        last_bad = 0
        for d in range(1, upper):
            k = factorize(d).omega
            if k < len(rhs) and d ** L < rhs[k]:
                last_bad = d
        searched = last_bad + 1
    else:
        searched = upper
    return max(searched, closed_form_threshold(params))


def threshold_inequalities_hold(d_value: int, omega: int, params: BoundParams) -> bool:
    """Exact check of both Kanold-form inequalities for a d of known omega."""
    _, delta, delta_prime = exponent_constants(params.Delta, params.c, params.eps_slack)
    L = lcm(delta.denominator, delta_prime.denominator)
    lhs = d_value ** L
    two_pow = 2 ** int((omega + 1) * delta_prime * L)
    return (
        lhs >= (omega + 1) ** int(delta * L) * two_pow
        and lhs >= params.D ** int(delta * L) * two_pow
    )


@dataclass(frozen=True)
class BoundReport:
    """The full constant ledger for one parameter set."""

    params: BoundParams
    x: int
    n: int
    N: int
    sigma_size: int
    f_value: int
    f_iterates: tuple[int, ...]
    lam: Fraction
    delta_exp: Fraction
    delta_prime_exp: Fraction
    alpha_prime: float
    beta_prime: Fraction
    closed_form: int
    final_delta: int

    def to_json_dict(self) -> dict:
        from .jsonio import encode_int

        return {
            "D": self.params.D,
            "Delta": self.params.Delta,
            "c": self.params.c,
            "d": self.params.d,
            "p": self.params.p,
            "eps": [self.params.eps_slack.numerator, self.params.eps_slack.denominator],
            "x": self.x,
            "n": self.n,
            "N": encode_int(self.N),
            "sigma_size": encode_int(self.sigma_size),
            "f_value": encode_int(self.f_value),
            "f_iterates": [encode_int(v) for v in self.f_iterates],
            "lambda": [self.lam.numerator, self.lam.denominator],
            "delta": [self.delta_exp.numerator, self.delta_exp.denominator],
            "delta_prime": [
                self.delta_prime_exp.numerator,
                self.delta_prime_exp.denominator,
            ],
            "alpha_prime": self.alpha_prime,
            "beta_prime": [self.beta_prime.numerator, self.beta_prime.denominator],
            "closed_form": encode_int(self.closed_form),
            "final_delta": encode_int(self.final_delta),
        }


def bound_report(params: BoundParams, scan_cap: int = 10 ** 6) -> BoundReport:
    """Assemble every constant for one parameter set."""
    lam, delta, delta_prime = exponent_constants(
        params.Delta, params.c, params.eps_slack
    )
    x = x_value(params)
    n = nth_prime(x)
    N = capital_n(params)
    iterates = tuple(iterated_f(params, i) for i in range(params.Delta + 1))
    beta_prime = delta_prime * params.beta + delta
    return BoundReport(
        params=params,
        x=x,
        n=n,
        N=N,
        sigma_size=sigma_size(params),
        f_value=f_bound(params),
        f_iterates=iterates,
        lam=lam,
        delta_exp=delta,
        delta_prime_exp=delta_prime,
        alpha_prime=float(params.alpha) ** float(delta_prime),
        beta_prime=beta_prime,
        closed_form=closed_form_threshold(params),
        final_delta=final_delta(params, scan_cap=scan_cap),
    )
