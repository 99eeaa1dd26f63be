"""Continuous Frechet distance: decision procedure and distance queries.

The decision procedure builds the free-space diagram at the query radius
and tests monotone reachability of the top-right corner.  Distances are
computed by bisection between the endpoint lower bound and the discrete
Frechet upper bound, except for degenerate cases with an exact closed
form: one-vertex curves (point-to-curve distance) and single-segment
curves (monotone interval stabbing, see
:func:`segment_curve_distance`).

All entry points are pure, order-invariant (arguments are put into a
canonical order internally, so symmetry is bit-exact) and safe for
concurrent use.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .curves import PolygonalCurve
from .errors import InvalidInputError


@dataclass(frozen=True)
class DistanceQueryOptions:
    """Termination control for distance bisection.

    The returned value ``v`` satisfies ``|v - d_F| <= max(abs_tol,
    rel_tol * v)``.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 0.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise InvalidInputError(f"rel_tol must be positive, got {self.rel_tol}")
        if not (self.abs_tol >= 0 and math.isfinite(self.abs_tol)):
            raise InvalidInputError(f"abs_tol must be >= 0, got {self.abs_tol}")


DEFAULT_OPTIONS = DistanceQueryOptions()


def _check_pair(sigma: PolygonalCurve, tau: PolygonalCurve):
    if sigma.dim != tau.dim:
        raise InvalidInputError(
            f"curves have different dimensions ({sigma.dim} vs {tau.dim})"
        )


def _canonical(sigma: PolygonalCurve, tau: PolygonalCurve):
    # Total order on (complexity, vertex bytes); makes every query
    # bit-for-bit symmetric in its arguments.
    ka = (len(sigma), sigma.key())
    kb = (len(tau), tau.key())
    if kb < ka:
        return tau, sigma
    return sigma, tau


def frechet_decide(sigma: PolygonalCurve, tau: PolygonalCurve, eps: float) -> bool:
    """True iff ``d_F(sigma, tau) <= eps`` (closed comparison)."""
    _check_pair(sigma, tau)
    if not (math.isfinite(eps) and eps >= 0):
        raise InvalidInputError(f"eps must be a finite non-negative real, got {eps}")
    a, b = _canonical(sigma, tau)
    return bool(_kernels.decide(a.vertices, b.vertices, float(eps)))


def discrete_frechet(sigma: PolygonalCurve, tau: PolygonalCurve) -> float:
    """Discrete Frechet distance over vertex sequences.

    Test oracle: an upper bound on the continuous distance that never drops
    below the endpoint lower bound.
    """
    _check_pair(sigma, tau)
    a, b = _canonical(sigma, tau)
    return float(_kernels.discrete_frechet(a.vertices, b.vertices))


def point_curve_distance(p: np.ndarray, curve: PolygonalCurve) -> float:
    """Exact Frechet distance from a constant curve at ``p``: the farthest
    point of ``curve``, attained at a vertex."""
    diff = curve.vertices - np.asarray(p, dtype=np.float64)
    return float(np.sqrt(np.max(np.einsum("ij,ij->i", diff, diff))))


def segment_curve_distance(p, q, curve: PolygonalCurve) -> float:
    """Exact Frechet distance between the segment ``p -> q`` and ``curve``."""
    p = np.ascontiguousarray(p, dtype=np.float64)
    q = np.ascontiguousarray(q, dtype=np.float64)
    if p.shape != (curve.dim,) or q.shape != (curve.dim,):
        raise InvalidInputError("segment endpoints must match the curve dimension")
    return float(_kernels.segment_distance(p, q, curve.vertices))


def segment_curve_distance_batch(starts, ends, curve: PolygonalCurve) -> np.ndarray:
    """Vectorized :func:`segment_curve_distance` over endpoint arrays of
    shape ``(n, d)``; degenerate rows (``start == end``) are point curves."""
    A = np.ascontiguousarray(starts, dtype=np.float64)
    B = np.ascontiguousarray(ends, dtype=np.float64)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if B.ndim == 1:
        B = B.reshape(-1, 1)
    if A.shape != B.shape or A.shape[1] != curve.dim:
        raise InvalidInputError("endpoint arrays must both be (n, d) with the curve's d")
    out = np.empty(A.shape[0], dtype=np.float64)
    _kernels.segment_distance_batch(A, B, curve.vertices, out)
    return out


def _distance_bisection(
    sigma: PolygonalCurve, tau: PolygonalCurve, opts: DistanceQueryOptions
) -> float:
    """General-path distance (no closed-form shortcuts); kept callable on
    its own so the exact special cases can be cross-checked against it."""
    a, b = _canonical(sigma, tau)
    return float(
        _kernels.bisect_distance(a.vertices, b.vertices, opts.rel_tol, opts.abs_tol)
    )


def frechet_distance(
    sigma: PolygonalCurve,
    tau: PolygonalCurve,
    opts: DistanceQueryOptions | None = None,
) -> float:
    """Frechet distance within the tolerance of ``opts``.

    Pairs where the simpler curve is a point or a single segment are
    answered exactly; everything else is bisected between the endpoint
    lower bound and the discrete upper bound using
    :func:`frechet_decide` as the oracle.
    """
    _check_pair(sigma, tau)
    if opts is None:
        opts = DEFAULT_OPTIONS
    a, b = _canonical(sigma, tau)
    if len(a) == 1:
        return point_curve_distance(a.vertices[0], b)
    if len(a) == 2:
        return float(_kernels.segment_distance(a.vertices[0], a.vertices[1], b.vertices))
    return _distance_bisection(a, b, opts)


def pairwise_distances(
    rows: Sequence[PolygonalCurve],
    cols: Sequence[PolygonalCurve],
    opts: DistanceQueryOptions | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Distance matrix ``D[i, j] = d_F(rows[i], cols[j])``.

    Embarrassingly parallel over rows; the result is independent of
    ``threads`` because every entry lands at its own index.
    """
    out = np.empty((len(rows), len(cols)), dtype=np.float64)

    def fill(i):
        r = rows[i]
        for j, c in enumerate(cols):
            out[i, j] = frechet_distance(r, c, opts)

    if threads > 1 and len(rows) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, range(len(rows))))
    else:
        for i in range(len(rows)):
            fill(i)
    return out


def self_distances(
    curves: Sequence[PolygonalCurve],
    opts: DistanceQueryOptions | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Symmetric all-pairs matrix with a zero diagonal (each pair computed
    once)."""
    n = len(curves)
    out = np.zeros((n, n), dtype=np.float64)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]

    def fill(t):
        i, j = t
        out[i, j] = out[j, i] = frechet_distance(curves[i], curves[j], opts)

    if threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, pairs))
    else:
        for t in pairs:
            fill(t)
    return out
