"""Counting floor-set elements in the residue class a mod q.

Residues follow the convention 1 <= a <= q, with a = q standing for the
class of multiples of q.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .floorset import MAX_X, FloorSet, isqrt


@dataclass(frozen=True, order=True)
class ProgressionQuery:
    x: int
    q: int
    a: int

    def __post_init__(self) -> None:
        x, q, a = self.x, self.q, self.a
        if not all(isinstance(v, (int, np.integer)) for v in (x, q, a)):
            raise TypeError("x, q, a must be integers")
        if x < 3:
            raise ValueError(f"x must be >= 3, got {x}")
        if x > MAX_X:
            raise ValueError(f"x={x} exceeds the supported limit {MAX_X}")
        if q < 1:
            raise ValueError(f"q must be >= 1, got {q}")
        if not 1 <= a <= q:
            raise ValueError(f"residue must satisfy 1 <= a <= q, got a={a}, q={q}")
        if a > x:
            raise ValueError(f"a={a} exceeds x={x}")


@dataclass(frozen=True)
class ProgressionReport:
    query: ProgressionQuery
    count: int
    main_term: float
    raw_error: float
    normalized_error: float


@dataclass(frozen=True)
class DecompositionReport:
    """Exact split of S(x; q, a) along the d-axis, m = dq + a.

    ``s1`` counts members with m <= sqrt(x); ``s2`` is the integer sum of
    floor differences over sqrt(x) < m with d <= (x/q)^(2/3); ``s21`` and
    ``s22_0``, ``s22_1`` are its smooth and sawtooth parts, so that
    s2 == s21 - s22_0 + s22_1 up to rounding.  ``boundary_correction``
    counts the remaining members (the tail d > (x/q)^(2/3)), making
    s1 + s2 + boundary_correction the exact count.
    """

    query: ProgressionQuery
    s1: int
    s2: int
    s21: float
    s22_0: float
    s22_1: float
    boundary_correction: int


def normalize_residue(q: int, a: int) -> int:
    """Map any integer residue to the representative in [1, q]."""
    r = a % q
    return q if r == 0 else r


def error_envelope(x: float, q: float) -> float:
    """(x/q)^(1/3) * log x, natural log."""
    return (x / q) ** (1.0 / 3.0) * math.log(x)


def _members_up_to(x: int, q: int, a: int, m_max: int, d_min: int = 0) -> int:
    """Members m = dq + a with d >= d_min and m <= m_max, by the criterion."""
    if m_max < a + d_min * q:
        return 0
    d_max = (m_max - a) // q
    m = np.arange(d_min, d_max + 1, dtype=np.int64) * q + a
    return int(np.count_nonzero((x // m) > (x // (m + 1))))


def _large_members_in_class(x: int, q: int, a: int, r: int, m_cap: int | None = None) -> int:
    """Members m > r with m = a mod q (and m <= m_cap when given).

    Every such m is x // n for a unique n <= x // (r + 1).
    """
    n = np.arange(1, x // (r + 1) + 1, dtype=np.int64)
    m = x // n
    mask = (m % q) == (a % q)
    if m_cap is not None:
        mask &= m <= m_cap
    return int(np.count_nonzero(mask))


def progression_count(x: int, q: int, a: int) -> int:
    """Exact S(x; q, a) with O(sqrt(x)) integer operations."""
    r = isqrt(x)
    return _members_up_to(x, q, a, r) + _large_members_in_class(x, q, a, r)


def make_report(query: ProgressionQuery, count: int) -> ProgressionReport:
    x, q = query.x, query.q
    main = 2.0 * math.sqrt(x) / q
    raw = count - main
    return ProgressionReport(query, count, main, raw, raw / error_envelope(x, q))


def count_progression(query: ProgressionQuery) -> ProgressionReport:
    return make_report(query, progression_count(query.x, query.q, query.a))


def count_progression_via_set(fs: FloorSet, q: int, a: int) -> int:
    if not 1 <= a <= q:
        raise ValueError(f"residue must satisfy 1 <= a <= q, got a={a}, q={q}")
    return int(np.count_nonzero(fs.values % q == a % q))


def _psi_of_quotients(x: int, m: np.ndarray) -> np.ndarray:
    # psi(x/m) = (x mod m)/m - 1/2 = (2 (x mod m) - m) / (2m), one rounding
    return (2 * (x % m) - m) / (2 * m)


def decompose(query: ProgressionQuery) -> DecompositionReport:
    x, q, a = query.x, query.q, query.a
    r = isqrt(x)
    # d <= (sqrt(x) - a)/q  <=>  dq + a <= isqrt(x) for integer dq + a
    s1 = _members_up_to(x, q, a, r)
    d_lo = (r - a) // q + 1 if r >= a else 0
    d_top = _floor_two_thirds(x, q)

    s2 = 0
    parts: tuple[list[float], list[float], list[float]] = ([], [], [])
    for lo, hi in chunk_ranges(d_lo, d_top):
        m = np.arange(lo, hi + 1, dtype=np.int64) * q + a
        s2 += int(np.sum((x // m) - (x // (m + 1))))
        mf = m.astype(np.float64)
        parts[0].append(math.fsum(x / mf - x / (mf + 1.0)))
        parts[1].append(math.fsum(_psi_of_quotients(x, m)))
        parts[2].append(math.fsum(_psi_of_quotients(x, m + 1)))
    s21, s22_0, s22_1 = (math.fsum(p) for p in parts)
    # tail: d > d_top (or everything above sqrt(x) when the middle range is empty)
    m_cap = max(d_top, d_lo - 1) * q + a
    tail = _large_members_in_class(x, q, a, r) - _large_members_in_class(x, q, a, r, m_cap)
    return DecompositionReport(query, s1, s2, s21, s22_0, s22_1, tail)


def chunk_ranges(lo: int, hi: int, size: int = 1 << 20) -> Iterable[tuple[int, int]]:
    """Inclusive sub-ranges of [lo, hi] with at most ``size`` integers each."""
    for start in range(lo, hi + 1, size):
        yield start, min(start + size - 1, hi)


def _floor_two_thirds(x: int, q: int) -> int:
    """floor((x/q)^(2/3)) computed exactly: largest D with D^3 q <= x^2."""
    target = x * x
    d = int(round((x / q) ** (2.0 / 3.0)))
    while d > 0 and d**3 * q > target:
        d -= 1
    while (d + 1) ** 3 * q <= target:
        d += 1
    return d


def default_qmax(x: float) -> int:
    """Largest q with q <= x^(1/4) / (ln x)^(3/2), floored at 1."""
    return max(1, math.floor(x**0.25 / math.log(x) ** 1.5))


def default_q_policy(x: int) -> list[int]:
    return list(range(1, default_qmax(x) + 1))


def generate_queries(
    x_grid: Iterable[int],
    q_policy: Callable[[int], Sequence[int]] = default_q_policy,
    a_policy: Callable[[int, int], Sequence[int]] | None = None,
    max_residues: int | None = None,
) -> list[ProgressionQuery]:
    """All (x, q, a) triples of a scan, sorted.

    ``a_policy`` defaults to every residue 1..q; ``max_residues`` caps the
    residues per q by taking an evenly spaced subset that always keeps a = q.
    """
    out = []
    for x in x_grid:
        for q in q_policy(x):
            if a_policy is None:
                residues = range(1, q + 1)
            else:
                residues = [normalize_residue(q, a) for a in a_policy(x, q)]
            residues = sorted(set(residues))
            if max_residues is not None and len(residues) > max_residues:
                idx = np.linspace(0, len(residues) - 1, max_residues).round().astype(int)
                residues = sorted({residues[i] for i in idx})
            out.extend(ProgressionQuery(int(x), int(q), int(a)) for a in residues)
    return sorted(out)


def _count_batch(queries: list[ProgressionQuery]) -> list[ProgressionReport]:
    return [count_progression(qr) for qr in queries]


def scan_errors(
    x_grid: Iterable[int],
    q_policy: Callable[[int], Sequence[int]] = default_q_policy,
    a_policy: Callable[[int, int], Sequence[int]] | None = None,
    max_residues: int | None = None,
    workers: int = 1,
) -> list[ProgressionReport]:
    """One report per (x, q, a), sorted by (x, q, a).

    With ``workers > 1`` the queries are grouped by (x, q) and farmed out to
    a process pool; each report is computed independently so the result does
    not depend on scheduling.
    """
    queries = generate_queries(x_grid, q_policy, a_policy, max_residues)
    if workers <= 1 or len(queries) < 2:
        return _count_batch(queries)
    groups: dict[tuple[int, int], list[ProgressionQuery]] = {}
    for qr in queries:
        groups.setdefault((qr.x, qr.q), []).append(qr)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        batches = list(pool.map(_count_batch, groups.values()))
    return sorted((rep for batch in batches for rep in batch), key=lambda rep: rep.query)
