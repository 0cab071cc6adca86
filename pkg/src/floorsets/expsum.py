"""Sawtooth sums over d of psi(x / (dq + a + delta)) and their exponent-pair bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .progression import chunk_ranges
from .vaaler import TWO_PI, VaalerPolynomial, remainder_bound

ACCEPTANCE_CONSTANT = 10.0
MAX_TERMS = 10**9
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class ExpSumQuery:
    x: int
    q: int
    a: int
    delta: int
    D: float
    D_prime: float

    def __post_init__(self) -> None:
        if not 1 <= self.a <= self.q:
            raise ValueError(f"residue must satisfy 1 <= a <= q, got a={self.a}, q={self.q}")
        if self.delta not in (0, 1):
            raise ValueError(f"delta must be 0 or 1, got {self.delta}")
        lo, hi = lemma_range(self.x, self.q, self.a)
        if not lo < self.D <= hi:
            raise ValueError(f"D={self.D} outside the admissible range ({lo}, {hi}]")
        if not self.D < self.D_prime <= 2 * self.D:
            raise ValueError(f"need D < D' <= 2D, got D={self.D}, D'={self.D_prime}")

    @property
    def d_range(self) -> tuple[int, int]:
        """Inclusive integer range of d in (D, D']; empty when lo > hi."""
        return math.floor(self.D) + 1, math.floor(self.D_prime)


@dataclass(frozen=True)
class ExponentPair:
    kappa: float
    lam: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.kappa <= 0.5 <= self.lam <= 1.0:
            raise ValueError(f"({self.kappa}, {self.lam}) is outside 0 <= k <= 1/2 <= l <= 1")


VAN_DER_CORPUT = ExponentPair(0.5, 0.5)


@dataclass(frozen=True)
class BoundReport:
    term1: float
    term2: float
    term3: float
    total: float
    optimal_H: int
    empirical: float | None = None


@dataclass(frozen=True)
class Decomposition:
    flat: complex
    dagger_bound: float
    residual: float


def lemma_range(x: float, q: float, a: float) -> tuple[float, float]:
    """((sqrt(x) - a)/q, (x/q)^(2/3)]: the admissible window positions."""
    return (math.sqrt(x) - a) / q, (x / q) ** (2.0 / 3.0)


def _moduli(x: int, q: int, a: int, delta: int, lo: int, hi: int) -> np.ndarray:
    return np.arange(lo, hi + 1, dtype=np.int64) * q + (a + delta)


def psi_sum(x: int, q: int, a: int, delta: int, d_lo: int, d_hi: int) -> float:
    """Correctly rounded sum of psi(x/m), m = dq + a + delta, d_lo <= d <= d_hi."""
    if d_hi - d_lo + 1 > MAX_TERMS:
        raise ValueError(f"{d_hi - d_lo + 1} terms exceeds the cost guard {MAX_TERMS}")
    parts = []
    for lo, hi in chunk_ranges(max(d_lo, 0), d_hi):
        m = _moduli(x, q, a, delta, lo, hi)
        # psi(x/m) = (2 (x mod m) - m) / (2m): one rounding
        parts.append(math.fsum((2 * (x % m) - m) / (2 * m)))
    return math.fsum(parts)


def frak_s(query: ExpSumQuery) -> float:
    lo, hi = query.d_range
    return psi_sum(query.x, query.q, query.a, query.delta, lo, hi)


def frak_s_decomposed(query: ExpSumQuery, H: int) -> Decomposition:
    """Vaaler split of the sawtooth sum with a degree-H polynomial.

    ``flat`` is sum_h phi(h/(H+1))/h * sum_d e(h x / m); the trigonometric
    part of the approximation is -Im(flat)/pi.  ``residual`` is the distance
    from that to the exact sum, which must not exceed ``dagger_bound``.
    """
    if H < 1 or H > query.D:
        raise ValueError(f"need 1 <= H <= D, got H={H}, D={query.D}")
    lo, hi = query.d_range
    if hi < lo:
        return Decomposition(0j, 0.0, 0.0)
    poly = VaalerPolynomial(H)
    weights = poly.weights
    x = query.x
    m = _moduli(x, query.q, query.a, query.delta, lo, hi)
    x_mod = x % m
    m_obj = m.astype(object) if int(m[-1]) * H >= _INT64_SAFE else None

    flat = 0j
    for h in range(1, H + 1):
        # h*x mod m in exact integer arithmetic; phase in [0, 1)
        if m_obj is None:
            num = (h * x_mod) % m
        else:
            num = np.array((h * x_mod.astype(object)) % m_obj, dtype=np.float64)
        theta = TWO_PI * (num / m)
        inner = complex(math.fsum(np.cos(theta)), math.fsum(np.sin(theta)))
        flat += float(weights[h - 1]) / h * inner

    exact = frak_s(query)
    approx = -flat.imag / math.pi
    dagger = math.fsum(remainder_bound(poly, x_mod / m))
    return Decomposition(complex(flat), float(dagger), float(abs(exact - approx)))


def exponent_pair_bound(x: float, q: float, D: float, pair: ExponentPair = VAN_DER_CORPUT) -> BoundReport:
    k, l = pair.kappa, pair.lam
    term1 = (x**k * D ** (l - k) * q ** (-k)) ** (1.0 / (1.0 + k))
    term2 = x**k * D ** (l - 2 * k) * q ** (-k)
    term3 = D * D * q / x
    H = optimize_H(x, q, D, pair)[0] if D >= 1 else 1
    return BoundReport(term1, term2, term3, term1 + term2 + term3, H)


def _g(H: float, x: float, q: float, D: float, pair: ExponentPair) -> float:
    k, l = pair.kappa, pair.lam
    return D / H + x**k * D ** (l - 2 * k) * q ** (-k) * H**k + D * D * q / x


def optimize_H(x: float, q: float, D: float, pair: ExponentPair = VAN_DER_CORPUT) -> tuple[int, float]:
    """Integer H in [1, floor(D)] minimising D/H + A H^k + x^-1 D^2 q.

    The objective is unimodal: its derivative changes sign once, at
    H^(1+k) = D / (k A).
    """
    if D < 1:
        raise ValueError(f"D must be >= 1, got {D}")
    k, l = pair.kappa, pair.lam
    top = math.floor(D)
    A = x**k * D ** (l - 2 * k) * q ** (-k)
    if k == 0.0:
        stationary = math.inf
    else:
        stationary = (D / (k * A)) ** (1.0 / (1.0 + k))
    base = min(max(stationary, 1.0), float(top))
    candidates = {1, top, math.floor(base), math.ceil(base)}
    candidates = {h for h in candidates if 1 <= h <= top}
    best = min(candidates, key=lambda h: (_g(h, x, q, D, pair), h))
    return best, _g(best, x, q, D, pair)


def dyadic_windows(x: int, q: int, a: int) -> list[tuple[float, float]]:
    """(D, min(2D, top)] windows covering the admissible range."""
    lo, top = lemma_range(x, q, a)
    windows = []
    D = lo
    if D < 1.0 and D < top:
        # doubling cannot start from a non-positive endpoint
        windows.append((D, min(1.0, top)))
        D = 1.0
    while D < top:
        nxt = min(2.0 * D, top)
        windows.append((D, nxt))
        D = nxt
    return windows


def dyadic_max_scan(x: int, q: int, a: int, delta: int) -> float:
    windows = dyadic_windows(x, q, a)
    terms = sum(max(0, math.floor(hi) - math.floor(lo)) for lo, hi in windows)
    if terms > MAX_TERMS:
        raise ValueError(f"{terms} terms exceeds the cost guard {MAX_TERMS}")
    best = 0.0
    for lo, hi in windows:
        val = psi_sum(x, q, a, delta, math.floor(lo) + 1, math.floor(hi))
        best = max(best, abs(val))
    return best


def lemma_report(query: ExpSumQuery, pair: ExponentPair = VAN_DER_CORPUT) -> BoundReport:
    """Bound terms at (x, q, D) together with the exact sum."""
    rep = exponent_pair_bound(query.x, query.q, query.D, pair)
    return BoundReport(rep.term1, rep.term2, rep.term3, rep.total, rep.optimal_H, frak_s(query))
