"""Scan configuration and the small parsers the CLI shares with scripts."""

from __future__ import annotations

import math
import os
from collections.abc import Sequence
from dataclasses import dataclass, field

from .progression import default_q_policy, normalize_residue

DEFAULT_C = 10.0
DEFAULT_MAX_RESIDUES = 200


def parse_int(text: str) -> int:
    """Integer literal, also accepting 1e6 and 10^6 forms."""
    text = text.strip().replace("_", "")
    if "^" in text:
        base, exp = text.split("^", 1)
        return int(base) ** int(exp)
    if "e" in text.lower():
        value = float(text)
        if not value.is_integer():
            raise ValueError(f"not an integer: {text!r}")
        return int(value)
    return int(text)


def parse_int_list(text: str) -> list[int]:
    """Comma-separated integers; ``lo..hi`` expands to an inclusive range."""
    out: list[int] = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        if ".." in item:
            lo, hi = item.split("..", 1)
            out.extend(range(parse_int(lo), parse_int(hi) + 1))
        else:
            out.append(parse_int(item))
    return out


def parse_float_list(text: str) -> list[float]:
    return [float(s) for s in text.split(",") if s.strip()]


@dataclass
class ScanConfig:
    """What ``scan`` evaluates.

    q_policy is ``"paper_range"`` (1 <= q <= x^(1/4)/(ln x)^(3/2), at least
    q = 1), ``"explicit"`` (use ``q_values``) or ``"single"`` (one modulus).
    a_policy is ``"all"`` or ``"explicit"`` (use ``a_values``).
    """

    x_grid: list[int]
    q_policy: str = "paper_range"
    q_values: list[int] = field(default_factory=list)
    a_policy: str = "all"
    a_values: list[int] = field(default_factory=list)
    max_residues: int | None = DEFAULT_MAX_RESIDUES
    constant_C: float = DEFAULT_C
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self) -> None:
        if not self.x_grid:
            raise ValueError("x_grid must be nonempty")
        if any(x < 3 for x in self.x_grid):
            raise ValueError("every x in the grid must be >= 3")
        if not (self.constant_C > 0 and math.isfinite(self.constant_C)):
            raise ValueError(f"constant_C must be positive, got {self.constant_C}")
        if self.q_policy not in ("paper_range", "explicit", "single"):
            raise ValueError(f"unknown q policy {self.q_policy!r}")
        if self.q_policy == "single" and len(self.q_values) != 1:
            raise ValueError("single q policy needs exactly one modulus")
        if self.q_policy == "explicit" and not self.q_values:
            raise ValueError("explicit q policy needs at least one modulus")
        if any(q < 1 for q in self.q_values):
            raise ValueError("moduli must be >= 1")
        if self.a_policy not in ("all", "explicit"):
            raise ValueError(f"unknown a policy {self.a_policy!r}")
        if self.a_policy == "explicit" and not self.a_values:
            raise ValueError("explicit a policy needs at least one residue")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.output_format!r}")

    def moduli(self, x: int) -> Sequence[int]:
        if self.q_policy == "paper_range":
            return default_q_policy(x)
        return [q for q in self.q_values if q <= x]

    def residues(self, x: int, q: int) -> Sequence[int]:
        if self.a_policy == "all":
            return range(1, q + 1)
        return sorted({normalize_residue(q, a) for a in self.a_values})
