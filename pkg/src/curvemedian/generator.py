"""Seeded synthetic curve datasets for experiments and verification.

Each cluster has a base polygonal curve (a random walk from a scattered
anchor); member curves resample the base at random parameter positions and
perturb the vertices, so curves within a cluster are close under the
Frechet distance while clusters stay separated by the anchor spread.
"""

from __future__ import annotations

import numpy as np

from .curves import CurveDataset, normalize
from .errors import InvalidInputError


def _interp(base: np.ndarray, ts: np.ndarray) -> np.ndarray:
    m = base.shape[0]
    grid = np.linspace(0.0, 1.0, m)
    return np.stack([np.interp(ts, grid, base[:, j]) for j in range(base.shape[1])], axis=1)


def synthetic_clusters(
    n_clusters: int,
    curves_per_cluster: int,
    complexity,
    d: int,
    separation: float = 10.0,
    noise: float = 0.1,
    walk_scale: float = 1.0,
    seed: int = 0,
):
    """Generate a clustered dataset; returns ``(dataset, labels)``.

    ``complexity`` is either a fixed vertex count or an inclusive
    ``(lo, hi)`` range sampled per curve.  ``noise`` is the per-vertex
    perturbation scale; keep it well below ``separation`` for recoverable
    clusters.
    """
    if n_clusters < 1 or curves_per_cluster < 1 or d < 1:
        raise InvalidInputError("n_clusters, curves_per_cluster and d must be >= 1")
    if isinstance(complexity, int):
        lo, hi = complexity, complexity
    else:
        lo, hi = complexity
    if lo < 2 or hi < lo:
        raise InvalidInputError(f"bad complexity range ({lo}, {hi})")

    rng = np.random.default_rng(seed)
    curves = []
    labels = []
    for c in range(n_clusters):
        anchor = rng.normal(scale=separation, size=d)
        steps = rng.normal(scale=walk_scale, size=(hi, d))
        base = anchor + np.cumsum(steps, axis=0)
        for i in range(curves_per_cluster):
            m = int(rng.integers(lo, hi + 1))
            ts = np.sort(rng.random(m))
            ts[0] = 0.0
            ts[-1] = 1.0
            verts = _interp(base, ts) + rng.normal(scale=noise, size=(m, d))
            curves.append(normalize(verts, id=f"c{c}_{i}"))
            labels.append(c)
    return CurveDataset(curves), np.asarray(labels)


def random_center_sets(
    dataset: CurveDataset,
    k: int,
    ell: int,
    count: int,
    seed: int = 0,
    spread: float = 1.0,
):
    """Battery of random center sets living near the dataset.

    Half of the centers are perturbed resamplings of random input curves,
    half are uniform points in the (padded) bounding box joined into
    random walks; both kinds have at most ``ell`` vertices.
    """
    rng = np.random.default_rng(seed)
    allv = np.vstack([c.vertices for c in dataset])
    lo = allv.min(axis=0)
    hi = allv.max(axis=0)
    pad = spread * (hi - lo + 1.0)
    scale = float(np.max(hi - lo) + 1.0)
    sets = []
    for _ in range(count):
        centers = []
        for _ in range(k):
            m = int(rng.integers(2, ell + 1))
            if rng.random() < 0.5:
                src = dataset[int(rng.integers(0, len(dataset)))]
                ts = np.sort(rng.random(m))
                ts[0], ts[-1] = 0.0, 1.0
                verts = _interp(src.vertices, ts) + rng.normal(
                    scale=0.05 * scale, size=(m, dataset.dim)
                )
            else:
                start = rng.uniform(lo - pad, hi + pad)
                verts = start + np.cumsum(
                    rng.normal(scale=0.3 * scale, size=(m, dataset.dim)), axis=0
                )
            centers.append(normalize(verts))
        sets.append(centers)
    return sets
