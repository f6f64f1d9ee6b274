import math
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torsionlab.errors import ValidationError
from torsionlab.integers import (
    FactoredInteger,
    factorize,
    jacobsthal,
    jacobsthal_bounds,
    linnik_comparator,
    minimal_coprime_shift,
    nth_prime,
    rosser_upper,
    squarefree_quotient,
)

from oracles import (
    brute_min_coprime_shift,
    jacobsthal_by_definition,
    nth_prime_by_sieve,
    omega_by_gcd,
)


# --- factorize -------------------------------------------------------------


def test_factorize_examples():
    assert factorize(12).factors == ((2, 2), (3, 1))
    assert factorize(1).factors == ()
    assert factorize(97).factors == ((97, 1),)


def test_factorize_rejects_zero():
    with pytest.raises(ValidationError):
        factorize(0)


@given(st.integers(min_value=1, max_value=10 ** 7))
def test_factorize_invariants(n):
    fi = factorize(n)
    prod = 1
    for p, e in fi.factors:
        prod *= p ** e
    assert prod == n
    assert fi.omega == len(fi.factors) == omega_by_gcd(n)
    assert n % fi.radical == 0
    # radical squarefree: no prime square divides it
    for p, _ in fi.factors:
        assert fi.radical % (p * p) != 0
    assert (n == 1) == (fi.factors == ())


# --- primes ----------------------------------------------------------------


def test_nth_prime_examples():
    assert nth_prime(1) == 2
    assert nth_prime(4) == 7
    assert nth_prime(25) == 97


def test_nth_prime_against_sieve():
    for x in range(1, 500):
        assert nth_prime(x) == nth_prime_by_sieve(x)


def test_nth_prime_rejects_zero():
    with pytest.raises(ValidationError):
        nth_prime(0)


def test_rosser_examples():
    v4 = rosser_upper(4)
    expected4 = 4 * math.log(4) * (1 + math.log(math.log(4)))
    assert abs(v4 - expected4) < 1e-9
    assert v4 >= nth_prime_by_sieve(4) == 7
    v10 = rosser_upper(10)
    expected10 = 10 * math.log(10) * (1 + math.log(math.log(10)))
    assert abs(v10 - expected10) < 1e-9
    assert v10 >= nth_prime_by_sieve(10) == 29
    with pytest.raises(ValidationError):
        rosser_upper(3)


def test_rosser_dominates_primes_small():
    for x in range(4, 2000):
        assert nth_prime(x) <= rosser_upper(x)


# --- Jacobsthal ------------------------------------------------------------


def test_jacobsthal_examples():
    assert jacobsthal(1) == 1
    assert jacobsthal(10) == 4
    assert jacobsthal(30) == 6


def test_jacobsthal_rejects_zero():
    with pytest.raises(ValidationError):
        jacobsthal(0)


def test_jacobsthal_matches_definition_oracle():
    for d in range(1, 2000):
        assert jacobsthal(d) == jacobsthal_by_definition(d), d


def test_jacobsthal_radical_invariance():
    for d in range(1, 2000):
        assert jacobsthal(d) == jacobsthal(factorize(d).radical)


def test_jacobsthal_bounds_examples():
    k30, s30 = jacobsthal_bounds(30)
    assert k30 == 8 and k30 >= jacobsthal(30) == 6
    assert s30 is not None and s30 >= 6
    k2, s2 = jacobsthal_bounds(2)
    assert k2 == 2 == jacobsthal(2) and s2 is None
    assert jacobsthal_bounds(1) == (1, None)


def test_jacobsthal_bounds_hold():
    for d in range(1, 3000):
        g = jacobsthal(d)
        kanold, stevens = jacobsthal_bounds(d)
        assert g <= kanold
        if stevens is not None:
            assert g <= stevens


# --- squarefree quotient ---------------------------------------------------


def test_squarefree_quotient_examples():
    assert squarefree_quotient(12, 4) == 3
    assert squarefree_quotient(10, 3) == 10
    assert squarefree_quotient(8, 2) == 2


@given(st.integers(1, 10 ** 5), st.integers(1, 10 ** 5))
def test_squarefree_quotient_properties(d, n):
    q = squarefree_quotient(d, n)
    assert d % q == 0
    fi = factorize(q)
    assert all(e == 1 for _, e in fi.factors)
    # every prime of d not dividing gcd-cleared part... q covers primes of d/gcd(d,n)
    rest = d // gcd(d, n)
    assert rest % q == 0 or q % factorize(rest).radical == 0


# --- minimal coprime shift ---------------------------------------------------


def test_minimal_coprime_shift_examples():
    assert minimal_coprime_shift(1, 1, 6) == 0
    k = minimal_coprime_shift(2, 3, 10)
    assert k == 3
    assert k < jacobsthal(10)
    with pytest.raises(ValidationError):
        minimal_coprime_shift(2, 2, 4)


@settings(max_examples=400)
@given(st.integers(0, 500), st.integers(1, 500), st.integers(1, 500))
def test_minimal_coprime_shift_matches_brute_force(a, n, d):
    h = gcd(n, d)
    if gcd(a, h) != 1:
        with pytest.raises(ValidationError):
            minimal_coprime_shift(a, n, d)
        assert brute_min_coprime_shift(a, n, d, k_max=5000) is None
        return
    k = minimal_coprime_shift(a, n, d)
    assert k == brute_min_coprime_shift(a, n, d)
    assert gcd(a + k * n, d) == 1
    assert k < jacobsthal(squarefree_quotient(d, n))


# --- Linnik comparator -------------------------------------------------------


def test_linnik_examples():
    assert linnik_comparator(1, 1) == 1.0
    assert abs(linnik_comparator(2, 30) - 2 ** 5.2 * 4) < 1e-9
    assert abs(linnik_comparator(2, 30) - 147.033) < 0.01
    assert abs(linnik_comparator(3, 1) - 3 ** 5.2) < 1e-9
    assert abs(linnik_comparator(3, 1) - 302.713) < 0.01


def test_factored_integer_direct():
    fi = FactoredInteger(12, ((2, 2), (3, 1)))
    assert fi.omega == 2
    assert fi.radical == 6
    assert int(fi) == 12
