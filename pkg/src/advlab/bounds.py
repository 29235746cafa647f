"""Closed-form capacity bound curves and their CSV emission."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "BoundCurve",
    "binary_entropy",
    "bsc_capacity",
    "constrained_rate",
    "convolve",
    "curve_emit",
    "erasure_curve",
    "erasure_strong_upper",
    "strong_adversary_upper",
]


def binary_entropy(x: float) -> float:
    if not 0 <= x <= 1:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x}")
    if x == 0 or x == 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def bsc_capacity(p: float) -> float:
    return 1.0 - binary_entropy(p)


def convolve(omega: float, p: float) -> float:
    """Crossover of a Bernoulli(omega) input seen through BSC(p)."""
    return (1 - omega) * p + omega * (1 - p)


def constrained_rate(p: float, omega: float) -> float:
    """Best BSC(p) rate for codes whose words have weight at most omega*n."""
    if not (0 <= p <= 0.5 and 0 <= omega <= 0.5):
        raise ValueError("constrained_rate needs p, omega in [0, 1/2]")
    r = binary_entropy(convolve(omega, p)) - binary_entropy(p)
    if -1e-12 < r < 0:
        return 0.0
    return r


def _upper_high(p: float) -> float:
    return binary_entropy(1 - 3 * p + 4 * p * p) - binary_entropy(p)


def strong_adversary_upper(p: float) -> float:
    """Upper bound on the strongly-p-limited capacity, for p in [0, 1/2]."""
    if not 0 <= p <= 0.5:
        raise ValueError("strong_adversary_upper is defined for p in [0, 1/2]")
    if p <= 0.25:
        return bsc_capacity(p)
    return _upper_high(p)


def erasure_strong_upper(p: float) -> float:
    if not 0.5 <= p <= 1:
        raise ValueError("erasure bound is stated for p in [1/2, 1]")
    return (1 - p) * binary_entropy(p)


def _grid(start: float, stop: float, step: float) -> list[float]:
    if not step > 0:
        raise ValueError("grid step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9))
    pts = [round(start + k * step, 12) for k in range(count + 1)]
    if stop - pts[-1] > 1e-12:
        pts.append(stop)
    else:
        pts[-1] = stop
    return pts


@dataclass(frozen=True)
class BoundCurve:
    grid: tuple[float, ...]
    bsc_capacity: tuple[float, ...]
    strong_adv_upper: tuple[float, ...]
    knee_gap: float
    nonincreasing_above_knee: bool

    def csv_rows(self) -> list[str]:
        rows = ["p,bsc_capacity,strong_adv_upper"]
        rows += [
            f"{p:.12f},{b:.12f},{s:.12f}"
            for p, b, s in zip(self.grid, self.bsc_capacity, self.strong_adv_upper)
        ]
        return rows

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.csv_rows()) + "\n", newline="\n")


def curve_emit(grid_step: float) -> BoundCurve:
    if not 0 < grid_step <= 0.5:
        raise ValueError("grid step must lie in (0, 1/2]")
    grid = _grid(0.0, 0.5, grid_step)
    bsc = [bsc_capacity(p) for p in grid]
    strong = [strong_adversary_upper(p) for p in grid]
    knee_gap = abs(bsc_capacity(0.25) - _upper_high(0.25))
    upper = [s for p, s in zip(grid, strong) if p >= 0.25]
    mono = all(b <= a for a, b in zip(upper, upper[1:]))
    return BoundCurve(tuple(grid), tuple(bsc), tuple(strong), knee_gap, mono)


def erasure_curve(grid_step: float) -> list[str]:
    rows = ["p,erasure_upper"]
    rows += [f"{p:.12f},{erasure_strong_upper(p):.12f}" for p in _grid(0.5, 1.0, grid_step)]
    return rows
