"""Uniform bid and value grids ``points[i] = i * vbar / size``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit


@dataclass(frozen=True, eq=False)
class Grid:
    points: np.ndarray
    size: int
    vbar: float

    @property
    def step(self) -> float:
        return self.vbar / self.size

    def __len__(self):
        return self.size

    def floor_index(self, x: float) -> int:
        return floor_index(self, x)

    def ceil_index(self, x: float) -> int:
        """Smallest index with ``points[i] >= x``; ``size`` when none."""
        return int(first_at_least(self.points, self.vbar, x))


def make_grid(size: int, vbar: float) -> Grid:
    if size < 1:
        raise ValueError(f"grid size must be >= 1, got {size}")
    if not vbar > 0:
        raise ValueError(f"vbar must be > 0, got {vbar}")
    points = np.arange(size, dtype=float) * vbar / size
    points.flags.writeable = False
    return Grid(points, int(size), float(vbar))


@njit(cache=True)
def grid_floor(points, vbar, x):
    size = points.shape[0]
    if x >= vbar:
        return size - 1
    i = int(x * size / vbar)
    if i >= size:
        i = size - 1
    while i > 0 and points[i] > x:
        i -= 1
    while i + 1 < size and points[i + 1] <= x:
        i += 1
    return i


@njit(cache=True)
def first_at_least(points, vbar, x):
    size = points.shape[0]
    if x <= 0.0:
        return 0
    if x > points[size - 1]:
        return size
    i = int(x * size / vbar)
    if i > size:
        i = size
    while i > 0 and points[i - 1] >= x:
        i -= 1
    while i < size and points[i] < x:
        i += 1
    return i


def floor_index(grid: Grid, x: float) -> int:
    """Largest ``i`` with ``points[i] <= x`` (top index for ``x >= vbar``)."""
    if x < 0:
        raise ValueError(f"floor_index needs x >= 0, got {x}")
    return int(grid_floor(grid.points, grid.vbar, float(x)))
