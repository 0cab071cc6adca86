"""Primes inside the floor set and the smooth counting function Li_S."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .floorset import cardinality_exact, enumerate_floor_set

# The first twelve primes are a complete witness set below 3.18e23; inputs
# are capped at 2^64.
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_PREFILTER_LIMIT = 1000
_SIEVE_LIMIT = 10**7
_LIMIT = 1 << 64


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 2^64."""
    n = int(n)
    if n >= _LIMIT:
        raise ValueError(f"{n} is outside the 64-bit range")
    if n < 2:
        return False
    for p in _WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _WITNESSES:
        y = pow(a, d, n)
        if y == 1 or y == n - 1:
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def sieve(limit: int) -> np.ndarray:
    """Boolean table, entry i is True iff i is prime, for 0 <= i <= limit."""
    table = np.ones(limit + 1, dtype=bool)
    table[: min(2, limit + 1)] = False
    for p in range(2, math.isqrt(limit) + 1):
        if table[p]:
            table[p * p :: p] = False
    return table


_SMALL_TABLE = sieve(_PREFILTER_LIMIT)
_SMALL_PRIMES = np.flatnonzero(_SMALL_TABLE)


def count_primes_in(values: np.ndarray) -> int:
    """Number of primes in an int64 array of distinct positive integers."""
    values = np.asarray(values, dtype=np.int64)
    if values.size == 0:
        return 0
    small = values[values <= _PREFILTER_LIMIT]
    big = values[values > _PREFILTER_LIMIT]
    count = int(np.count_nonzero(_SMALL_TABLE[small]))
    # trial division by p <= 1000 removes most composites before Miller-Rabin
    alive = np.ones(big.size, dtype=bool)
    for p in _SMALL_PRIMES:
        alive &= (big % p) != 0
    return count + sum(1 for v in big[alive].tolist() if is_prime(v))


def pi_s(x: int) -> int:
    """Number of primes among the distinct values of x // n."""
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    vals = enumerate_floor_set(x).values
    cut = min(math.isqrt(x), _SIEVE_LIMIT)
    low = vals[vals <= cut]
    return int(np.count_nonzero(sieve(cut)[low])) + count_primes_in(vals[vals > cut])


def adaptive_simpson(f, lo: float, hi: float, tol: float, max_depth: int = 60) -> float:
    """Adaptive Simpson quadrature with Richardson correction.

    Each accepted panel satisfies |S_fine - S_coarse| <= 15 * tol_panel, the
    panel tolerances summing to ``tol``.
    """

    def simpson(a, fa, m, fm, b, fb):
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    fa, fb = f(lo), f(hi)
    mid = 0.5 * (lo + hi)
    fm = f(mid)
    stack = [(lo, fa, mid, fm, hi, fb, simpson(lo, fa, mid, fm, hi, fb), tol, 0)]
    pieces = []
    while stack:
        a, fa, m, fm, b, fb, whole, eps, depth = stack.pop()
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(a, fa, lm, flm, m, fm)
        right = simpson(m, fm, rm, frm, b, fb)
        diff = left + right - whole
        if depth >= max_depth or abs(diff) <= 15.0 * eps:
            pieces.append(left + right + diff / 15.0)
        else:
            stack.append((a, fa, lm, flm, m, fm, left, eps / 2.0, depth + 1))
            stack.append((m, fm, rm, frm, b, fb, right, eps / 2.0, depth + 1))
    return math.fsum(pieces)


def li_s_parts(x: float, tol: float = 1e-9) -> tuple[float, float]:
    """The two integrals of Li_S: int_2^sqrt(x) dt/log t and dt/log(x/t)."""
    if x < 5:
        raise ValueError(f"x must be >= 5, got {x}")
    if not 0 < tol <= 1e-3:
        raise ValueError(f"tol must lie in (0, 1e-3], got {tol}")
    root = math.sqrt(x)
    log_x = math.log(x)
    first = adaptive_simpson(lambda t: 1.0 / math.log(t), 2.0, root, tol)
    second = adaptive_simpson(lambda t: 1.0 / (log_x - math.log(t)), 2.0, root, tol)
    return first, second


def li_s(x: float, tol: float = 1e-9) -> float:
    first, second = li_s_parts(x, tol)
    return first + second


@dataclass(frozen=True)
class PrimeCountReport:
    x: int
    pi_s: int
    li_s: float
    heyman_main: float
    ratio: float


def prime_count_report(x: int, tol: float = 1e-9) -> PrimeCountReport:
    count = pi_s(x)
    smooth = li_s(x, tol)
    if count > cardinality_exact(x):
        raise RuntimeError(f"prime count {count} exceeds the size of the floor set")
    return PrimeCountReport(x, count, smooth, heyman_main_term(x), count / smooth)


def heyman_main_term(x: float) -> float:
    """2 sqrt(x) / log sqrt(x)."""
    return 2.0 * math.sqrt(x) / math.log(math.sqrt(x))
