import math

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from floorsets.floorset import brute_force_floor_set, cardinality_exact
from floorsets.primes import (
    adaptive_simpson,
    count_primes_in,
    heyman_main_term,
    is_prime,
    li_s,
    li_s_parts,
    pi_s,
    prime_count_report,
    sieve,
)


def trial_division(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def test_is_prime_rejects_beyond_64_bits():
    # smallest strong pseudoprime to every base up to 37
    with pytest.raises(ValueError):
        is_prime(318665857834031151167461)


def test_is_prime_small_range():
    for n in range(-5, 20000):
        assert is_prime(n) == trial_division(n), n


@pytest.mark.parametrize(
    "n, expected",
    [
        (2**61 - 1, True),
        (2**62 - 57, True),
        (3215031751, False),  # strong pseudoprime to bases 2, 3, 5, 7
        (3825123056546413051, False),  # strong pseudoprime to the first nine primes
        (1000000007 * 998244353, False),
    ],
)
def test_is_prime_hard_cases(n, expected):
    assert is_prime(n) is expected
    assert bool(sympy.isprime(n)) is expected


@settings(max_examples=300)
@given(st.integers(min_value=2, max_value=2**40))
def test_is_prime_matches_mpmath(n):
    assert is_prime(n) == bool(sympy.isprime(n))


def test_sieve():
    table = sieve(100)
    assert [i for i in range(101) if table[i]] == [i for i in range(101) if trial_division(i)]


def test_pi_s_examples():
    assert pi_s(2) == 1
    assert pi_s(100) == 5
    assert [v for v in brute_force_floor_set(100).tolist() if trial_division(v)] == [2, 3, 5, 7, 11]


def test_pi_s_regression_million():
    # frozen from trial division over the 1999 elements of S(10^6)
    assert pi_s(10**6) == 277


def test_pi_s_matches_oracle_dense():
    for x in range(2, 3000):
        vals = brute_force_floor_set(x).tolist()
        assert pi_s(x) == sum(trial_division(v) for v in vals), x


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=2, max_value=10**5))
def test_pi_s_matches_oracle(x):
    vals = brute_force_floor_set(x).tolist()
    assert pi_s(x) == sum(trial_division(v) for v in vals)


def test_count_primes_in_large_values():
    vals = np.array([2**61 - 1, 2**61 + 1, 10**12 + 39, 10**12 + 37, 997, 1009, 1], dtype=np.int64)
    assert count_primes_in(vals) == sum(bool(sympy.isprime(int(v))) for v in vals)


def test_li_s_small_boundary():
    v = li_s(5)
    assert 0 < v < 1


def test_first_integral_against_li():
    first, _ = li_s_parts(10**4, 1e-9)
    assert first == pytest.approx(float(mpmath.li(100) - mpmath.li(2)), abs=1e-6)


@pytest.mark.parametrize("x", [50.0, 10**4, 10**8, 10**12])
def test_second_integral_change_of_variables(x):
    tol = 1e-9
    _, second = li_s_parts(x, tol)
    # u = x/t maps it to int_{sqrt x}^{x/2} x / (u^2 log u) du, and u = e^s
    # turns that into x (E1(log sqrt x) - E1(log(x/2)))
    with mpmath.workdps(40):
        xm = mpmath.mpf(x)
        other = xm * (mpmath.e1(mpmath.log(xm) / 2) - mpmath.e1(mpmath.log(xm / 2)))
    assert second == pytest.approx(float(other), abs=2 * tol)


def test_adaptive_simpson_polynomial_exact():
    assert adaptive_simpson(lambda t: t**3 - 2 * t, 0.0, 3.0, 1e-12) == pytest.approx(81 / 4 - 9, abs=1e-12)


def test_li_s_rejects():
    with pytest.raises(ValueError):
        li_s(4.9)
    with pytest.raises(ValueError):
        li_s(100, tol=0.1)
    with pytest.raises(ValueError):
        pi_s(1)


PRIME_GRID = [10**6, 10**8, 10**10, 10**12]


@pytest.fixture(scope="module")
def prime_reports():
    return [prime_count_report(x) for x in PRIME_GRID]


@pytest.mark.slow
def test_ratio_shrinks(prime_reports):
    gaps = [abs(r.ratio - 1) for r in prime_reports]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] <= 0.05


@pytest.mark.slow
def test_heyman_main_term_consistency(prime_reports):
    for r in prime_reports:
        assert abs(r.pi_s - heyman_main_term(r.x)) <= 10 * math.sqrt(r.x) / math.log(r.x) ** 2


@pytest.mark.slow
def test_monotone_and_bounded(prime_reports):
    counts = [r.pi_s for r in prime_reports]
    assert counts == sorted(counts)
    for r in prime_reports:
        assert r.pi_s <= cardinality_exact(r.x) and r.li_s > 0
