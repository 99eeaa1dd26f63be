"""Brute-force reference implementations used to check the fast paths.

These oracles trade time for independence: none of them reuse the code
path they are meant to validate.

* :func:`refinement_frechet` bounds the continuous distance by the
  discrete distance of finely subdivided copies (converges from above as
  the subdivision grows).
* :func:`exhaustive_subsequence_optimum` scans every vertex subsequence
  for the best simplification of a small curve.
* :func:`empirical_sensitivity` lower-bounds each curve's sensitivity by
  maximizing its cost fraction over many random center sets.
* :func:`grid_one_median` searches a dense grid of two-vertex centers,
  refining until the resolution provably drops below ``opt / target``.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import _kernels
from .curves import CurveDataset, PolygonalCurve
from .errors import InvalidInputError
from .frechet import frechet_distance, segment_curve_distance_batch


def refine_curve(curve: PolygonalCurve, pieces: int) -> PolygonalCurve:
    """Subdivide every edge into ``pieces`` equal parts (same curve as a
    mapping; more vertices)."""
    V = curve.vertices
    if len(curve) == 1:
        return curve
    out = [V[0]]
    for a, b in zip(V[:-1], V[1:]):
        for t in range(1, pieces + 1):
            out.append(a + (b - a) * (t / pieces))
    return PolygonalCurve(np.array(out))


def refinement_frechet(a: PolygonalCurve, b: PolygonalCurve, pieces: int = 200) -> float:
    """Discrete distance of subdivided copies; within ``O(edge/pieces)`` of
    the continuous distance and never below it."""
    ra = refine_curve(a, pieces)
    rb = refine_curve(b, pieces)
    return float(_kernels.discrete_frechet(ra.vertices, rb.vertices))


def exhaustive_subsequence_optimum(tau: PolygonalCurve, ell: int) -> float:
    """Best error over all vertex subsequences of size <= ``ell`` that keep
    both endpoints.  Feasible for small curves only."""
    m = len(tau)
    if ell < 2:
        raise InvalidInputError("ell must be >= 2 for the subsequence scan")
    if m <= ell:
        return 0.0
    V = tau.vertices
    best = np.inf
    interior = range(1, m - 1)
    for size in range(0, ell - 1):
        for combo in itertools.combinations(interior, size):
            idx = [0, *combo, m - 1]
            cand = PolygonalCurve(V[np.array(idx)])
            err = frechet_distance(tau, cand)
            if err < best:
                best = err
    return float(best)


def empirical_sensitivity(
    T: CurveDataset,
    k: int,
    n_sets: int = 10**5,
    seed: int = 0,
    grid_cells: int = 512,
    pad: float = 0.5,
) -> np.ndarray:
    """Per-curve lower bound on the sensitivity: the largest cost fraction
    observed over random center sets of ``k`` segments with endpoints on a
    bounding grid.  Distances use the closed-form segment evaluator, not
    the clustering pipeline."""
    n = len(T)
    d = T.dim
    allv = np.vstack([c.vertices for c in T])
    lo = allv.min(axis=0)
    hi = allv.max(axis=0)
    span = hi - lo
    lo = lo - pad * (span + 1e-9)
    hi = hi + pad * (span + 1e-9)
    rng = np.random.default_rng(seed)
    cells = rng.integers(0, grid_cells + 1, size=(n_sets * k * 2, d))
    pts = lo + cells * (hi - lo) / grid_cells
    starts = np.ascontiguousarray(pts[0::2])
    ends = np.ascontiguousarray(pts[1::2])
    per_curve = np.empty((n, n_sets))
    for j, c in enumerate(T):
        dist = segment_curve_distance_batch(starts, ends, c)  # (n_sets * k,)
        per_curve[j] = dist.reshape(n_sets, k).min(axis=1)
    totals = per_curve.sum(axis=0)
    ok = totals > 0
    frac = np.zeros((n, n_sets))
    frac[:, ok] = per_curve[:, ok] / totals[ok]
    return frac.max(axis=1)


def grid_one_median(
    T: CurveDataset,
    target: int = 100,
    pad: float = 0.25,
    max_rounds: int = 12,
):
    """Dense two-vertex center search for one-dimensional datasets.

    Returns ``(opt_cost, (a, b), resolution)`` where the final grid
    resolution is at most ``opt / target``: each round's grid minimum is
    within ``n * res / 2`` of the true optimum, giving a certified lower
    bound to drive the refinement.
    """
    if T.dim != 1:
        raise InvalidInputError("the dense grid oracle handles 1-d datasets only")
    n = len(T)
    allv = np.concatenate([c.vertices.ravel() for c in T])
    lo = float(allv.min())
    hi = float(allv.max())
    span = (hi - lo) + 1e-12
    lo -= pad * span
    hi += pad * span

    def sweep(res):
        xs = np.arange(lo, hi + res, res)
        A, B = np.meshgrid(xs, xs, indexing="ij")
        A = np.ascontiguousarray(A.reshape(-1, 1))
        B = np.ascontiguousarray(B.reshape(-1, 1))
        tot = np.zeros(A.shape[0])
        for c in T:
            tot += segment_curve_distance_batch(A, B, c)
        i = int(np.argmin(tot))
        return float(tot[i]), (float(A[i, 0]), float(B[i, 0]))

    res = (hi - lo) / 256
    best, center = sweep(res)
    for _ in range(max_rounds):
        if best == 0.0:
            break
        # snapping both endpoints moves the cost by at most n*res/2, so
        # this is a certified lower bound on the true optimum
        lower = best - n * res / 2.0
        if lower > 0 and res <= lower / target:
            break
        res = lower / (1.5 * target) if lower > 0 else res / 4.0
        best_new, center_new = sweep(res)
        if best_new < best:
            best, center = best_new, center_new
    return best, center, res
