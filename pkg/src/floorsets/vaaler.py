"""Vaaler's trigonometric approximation to the sawtooth psi(t) = t - [t] - 1/2."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi
# t - floor(t) rounds up to 1.0 for tiny negative t; clamp into [0, 1)
_BELOW_ONE = math.nextafter(1.0, 0.0)


def psi(t):
    """Sawtooth t - floor(t) - 1/2, in [-1/2, 1/2). Works on scalars and arrays."""
    if np.ndim(t) == 0:
        t = float(t)
        return min(t - math.floor(t), _BELOW_ONE) - 0.5
    return _reduce(t).reshape(np.shape(t)) - 0.5


def _one_minus_pi_cot(s: float) -> float:
    """1 - pi*s*cot(pi*s) for 0 <= s <= 1/2, stable as s -> 0."""
    if s < 1e-4:
        u = (math.pi * s) ** 2
        # 1 - z cot z = z^2/3 + z^4/45 + 2 z^6/945 + ...
        return u / 3.0 + u * u / 45.0 + 2.0 * u**3 / 945.0
    z = math.pi * s
    return 1.0 - z / math.tan(z)


def phi(t: float) -> float:
    """Vaaler's weight pi t (1-t) cot(pi t) + t on the open interval (0, 1).

    Rewritten as 1 - (1-t) g(t) for t <= 1/2 and t g(1-t) for t > 1/2,
    with g(s) = 1 - pi s cot(pi s), so no cotangent blows up at either end.
    """
    t = float(t)
    if not 0.0 < t < 1.0:
        raise ValueError(f"phi is defined on (0, 1), got {t}")
    if t <= 0.5:
        return 1.0 - (1.0 - t) * _one_minus_pi_cot(t)
    return t * _one_minus_pi_cot(1.0 - t)


@dataclass(frozen=True)
class VaalerPolynomial:
    """Degree-H approximation; coefficients[h-1] = phi(h/(H+1)) / (2 pi h)."""

    H: int
    coefficients: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if int(self.H) != self.H or self.H < 1:
            raise ValueError(f"H must be a positive integer, got {self.H}")
        h = np.arange(1, self.H + 1)
        weights = np.array([phi(k / (self.H + 1)) for k in h])
        coeffs = weights / (TWO_PI * h)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def weights(self) -> np.ndarray:
        """phi(h/(H+1)) for h = 1..H."""
        return self.coefficients * TWO_PI * np.arange(1, self.H + 1)


def _reduce(t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    return np.minimum(t - np.floor(t), _BELOW_ONE)


def vaaler_approx(poly: VaalerPolynomial, t, chunk: int = 4096):
    """-sum_{h=1..H} phi(h/(H+1)) sin(2 pi h t) / (pi h)."""
    scalar = np.ndim(t) == 0
    frac = _reduce(t)
    h = np.arange(1, poly.H + 1, dtype=np.float64)
    out = np.empty_like(frac)
    for lo in range(0, frac.size, chunk):
        block = frac[lo : lo + chunk]
        # h*t mod 1 before scaling keeps the sine argument small
        phase = np.multiply.outer(block, h)
        phase -= np.floor(phase)
        out[lo : lo + chunk] = -2.0 * (np.sin(TWO_PI * phase) @ poly.coefficients)
    return float(out[0]) if scalar else out


def remainder_bound(poly: VaalerPolynomial, t):
    """Fejér-kernel majorant of |psi(t) - vaaler_approx(poly, t)|.

    (1/(2(H+1)^2)) * (sin(pi (H+1) t) / sin(pi t))^2, equal to 1/2 at integers.
    """
    scalar = np.ndim(t) == 0
    frac = _reduce(t)
    # centre on the nearest integer so sin(pi r) keeps full relative precision
    r = np.where(frac >= 0.5, frac - 1.0, frac)
    n = poly.H + 1
    out = np.full_like(r, 0.5)
    s = np.sin(math.pi * r)
    # subnormal r: the ratio of sines is n to full precision, i.e. the peak value
    ok = np.abs(r) > 1e-200
    num_phase = n * r[ok]
    num_phase -= np.round(num_phase)
    out[ok] = (np.sin(math.pi * num_phase) / s[ok]) ** 2 / (2.0 * n * n)
    return float(out[0]) if scalar else out


def remainder_bound_direct(poly: VaalerPolynomial, t):
    """Same majorant as an explicit cosine sum, O(H) per point."""
    scalar = np.ndim(t) == 0
    frac = _reduce(t)
    n = poly.H + 1
    h = np.arange(1, n, dtype=np.float64)
    phase = np.multiply.outer(frac, h)
    phase -= np.floor(phase)
    kernel = 1.0 + 2.0 * (np.cos(TWO_PI * phase) @ (1.0 - h / n))
    out = kernel / (2.0 * n)
    return float(out[0]) if scalar else out
