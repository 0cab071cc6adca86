"""Exact enumeration of the floor-quotient set {x // n : 1 <= n <= x}."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass

import numpy as np

MAX_X = 1 << 62
BRUTE_FORCE_MAX_X = 10**7


def isqrt(v: int) -> int:
    """Largest r with r*r <= v (exact integer arithmetic)."""
    return math.isqrt(int(v))


def _check_x(x: int, limit: int = MAX_X) -> int:
    if isinstance(x, bool) or int(x) != x:
        raise TypeError(f"x must be an integer, got {x!r}")
    x = int(x)
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if x > limit:
        raise ValueError(f"x={x} exceeds the supported limit {limit}")
    return x


@dataclass(frozen=True, eq=False)
class FloorSet:
    """Sorted distinct values of x // n for 1 <= n <= x.

    ``values`` is a read-only int64 array.
    """

    x: int
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __iter__(self) -> Iterator[int]:
        return (int(v) for v in self.values)

    def __contains__(self, m: object) -> bool:
        i = np.searchsorted(self.values, m)
        return bool(i < len(self) and self.values[i] == m)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FloorSet):
            return NotImplemented
        return self.x == other.x and np.array_equal(self.values, other.values)

    def tolist(self) -> list[int]:
        return self.values.tolist()


def _small_members(x: int, r: int) -> np.ndarray:
    """Members m <= r, selected by the criterion x // m > x // (m + 1)."""
    m = np.arange(1, r + 1, dtype=np.int64)
    return m[(x // m) > (x // (m + 1))]


def _large_members(x: int, r: int) -> np.ndarray:
    """Members m > r, ascending: x // n for n = x // (r + 1), ..., 1."""
    n = np.arange(x // (r + 1), 0, -1, dtype=np.int64)
    return x // n


def enumerate_floor_set(x: int) -> FloorSet:
    """Distinct floor quotients of x with O(sqrt(x)) divisions.

    Quotients not exceeding isqrt(x) are tested with the membership
    criterion; larger ones are exactly x // n for n <= x // (isqrt(x) + 1),
    and those are pairwise distinct.
    """
    x = _check_x(x)
    r = isqrt(x)
    values = np.concatenate([_small_members(x, r), _large_members(x, r)])
    return FloorSet(x, values)


def iter_floor_set(
    x: int, callback: Callable[[np.ndarray], None], chunk: int = 1 << 16
) -> int:
    """Stream the floor set in ascending chunks to ``callback``.

    Memory stays O(chunk). Returns the number of values emitted.
    """
    x = _check_x(x)
    r = isqrt(x)
    total = 0
    for lo in range(1, r + 1, chunk):
        m = np.arange(lo, min(lo + chunk, r + 1), dtype=np.int64)
        block = m[(x // m) > (x // (m + 1))]
        if block.size:
            callback(block)
            total += block.size
    top = x // (r + 1)
    for hi in range(top, 0, -chunk):
        n = np.arange(hi, max(hi - chunk, 0), -1, dtype=np.int64)
        callback(x // n)
        total += n.size
    return total


def brute_force_floor_set(x: int) -> FloorSet:
    """O(x) reference: every quotient x // n, deduplicated and sorted."""
    x = _check_x(x, BRUTE_FORCE_MAX_X)
    n = np.arange(1, x + 1, dtype=np.int64)
    return FloorSet(x, np.unique(x // n))


def cardinality_exact(x: int) -> int:
    """Closed-form size of the floor set: isqrt(4x + 1) - 1."""
    x = _check_x(x)
    return isqrt(4 * x + 1) - 1


def is_member(x: int, m: int) -> bool:
    return 1 <= m <= x and x // m > x // (m + 1)
