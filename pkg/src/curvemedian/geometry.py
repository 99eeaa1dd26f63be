"""Euclidean primitives: points, balls and axis-aligned grids.

Grid cells are half-open boxes ``[i*r, (i+1)*r)`` per axis, so cell
membership at negative coordinates follows mathematical floor
(``-0.1 -> cell -1``).  All functions are pure and operate on plain
numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, InvalidInputError

#: Default bound on the number of grid cells enumerated by a single cover
#: computation.  Callers that issue many covers (the candidate-grid stage of
#: the 1-median search) pass an explicit shared budget instead.
DEFAULT_CELL_CAP = 10**8


def as_point(p) -> np.ndarray:
    """Coerce ``p`` to a finite 1-d float64 array."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise InvalidInputError(f"a point must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("point has non-finite coordinates")
    return arr


@dataclass(frozen=True)
class Ball:
    """Closed Euclidean ball ``{q : ||q - center|| <= radius}``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not math.isfinite(self.radius) or self.radius < 0:
            raise InvalidInputError(f"ball radius must be finite and >= 0, got {self.radius}")

    @property
    def dim(self) -> int:
        return self.center.shape[0]


def _check_cell_width(r: float) -> float:
    if not (isinstance(r, (int, float)) and math.isfinite(r) and r > 0):
        raise InvalidInputError(f"grid cell width must be a finite positive real, got {r}")
    return float(r)


def grid_point(p, r: float) -> np.ndarray:
    """Snap ``p`` onto the grid of cell width ``r``.

    Returns the lower corner ``(floor(p_1/r)*r, ..., floor(p_d/r)*r)`` of the
    half-open cell containing ``p``; the result is within ``sqrt(d)*r`` of
    ``p``.
    """
    r = _check_cell_width(r)
    p = as_point(p)
    return np.floor(p / r) * r


def bbox_cell_count(ball: Ball, r: float) -> int:
    """Number of grid cells enumerated when covering the ball's bounding
    box at cell width ``r`` (the cover itself can only be smaller)."""
    r = _check_cell_width(r)
    lo_idx = np.floor((ball.center - ball.radius) / r).astype(np.int64)
    hi_idx = np.floor((ball.center + ball.radius) / r).astype(np.int64)
    total = 1
    for n in hi_idx - lo_idx + 1:
        total *= int(n)
    return total


def grid_cover_ball(ball: Ball, r: float, *, cell_cap: int | None = None) -> np.ndarray:
    """Grid points of all cells of width ``r`` that intersect the closed ball.

    Enumerates integer cell indices in the ball's bounding box and keeps a
    cell iff its half-open box contains a point of the ball, decided exactly
    through the nearest box point.  Returns the cell corners as a
    lexicographically sorted ``(n_cells, d)`` array (set semantics).

    Raises :class:`CapacityError` when the bounding box holds more than
    ``cell_cap`` cells (default :data:`DEFAULT_CELL_CAP`).
    """
    r = _check_cell_width(r)
    if cell_cap is None:
        cell_cap = DEFAULT_CELL_CAP
    c = ball.center
    d = ball.dim

    lo_idx = np.floor((c - ball.radius) / r).astype(np.int64)
    hi_idx = np.floor((c + ball.radius) / r).astype(np.int64)
    counts = hi_idx - lo_idx + 1
    total = 1
    for n in counts:
        total *= int(n)
    if total > cell_cap:
        raise CapacityError(
            f"grid cover needs {total} cells but the cap is {cell_cap}",
            required=total,
        )

    axes = [np.arange(lo_idx[j], hi_idx[j] + 1, dtype=np.int64) for j in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    idx = np.stack([m.reshape(-1) for m in mesh], axis=1)  # (total, d)

    lower = idx * r
    upper = (idx + 1) * r
    nearest = np.clip(c, lower, upper)
    d2 = np.sum((nearest - c) ** 2, axis=1)
    r2 = ball.radius * ball.radius
    # Interior hits always qualify; a tangential hit only if the nearest
    # point lies inside the half-open box (not on an upper face).
    keep = d2 < r2
    boundary = d2 == r2
    if np.any(boundary):
        open_ok = np.all(nearest < upper, axis=1)
        keep |= boundary & open_ok

    pts = lower[keep]
    if pts.shape[0] == 0:
        return pts.reshape(0, d)
    order = np.lexsort(pts.T[::-1])
    return pts[order]
