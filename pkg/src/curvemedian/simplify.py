"""Minimum-error curve simplification over the vertex shortcut graph.

``simplify`` picks a subsequence of the input's vertices (keeping both
endpoints) whose polygonal curve stays close to the input under the
Frechet distance.  The shortcut graph has an edge ``(i, j)`` weighted by
the exact Frechet distance between the segment ``v_i -> v_j`` and the
subcurve ``v_i..v_j``; the result is the minimax path with at most
``ell - 1`` edges.  Chaining the per-edge matchings at shared vertices
shows the output's distance to the input never exceeds the minimax value,
and the minimax value is within a factor 4 of the best possible error over
*all* curves with ``ell`` vertices (vertex-restricted or not).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .curves import CurveDataset, PolygonalCurve, normalize
from .errors import InvalidInputError
from .frechet import frechet_distance, point_curve_distance


@dataclass(frozen=True)
class SimplificationResult:
    """A simplified curve together with its actual error.

    ``curve`` has complexity at most the requested ``ell``, its vertices
    are a subsequence of the input's vertices, and its first/last vertex
    equal the input's (except for the special single-point case).
    ``error`` is ``d_F(input, curve)`` up to distance tolerance.
    """

    curve: PolygonalCurve
    error: float


def _one_center(V: np.ndarray, iters: int = 64) -> np.ndarray:
    # Badoiu-Clarkson style minimax-center approximation over the vertices.
    x = V.mean(axis=0)
    for t in range(1, iters + 1):
        d2 = np.einsum("ij,ij->i", V - x, V - x)
        far = int(np.argmax(d2))
        x = x + (V[far] - x) / (t + 1.0)
    return x


def _simplify_to_point(tau: PolygonalCurve) -> SimplificationResult:
    # Approximate best constant curve: first/last vertex extended by an
    # approximate 1-center of the vertices.
    V = tau.vertices
    candidates = [V[0], V[-1], _one_center(V)]
    best = None
    best_err = np.inf
    for c in candidates:
        err = point_curve_distance(c, tau)
        if err < best_err:
            best_err = err
            best = c
    return SimplificationResult(PolygonalCurve(best.reshape(1, -1), id=tau.id), best_err)


def simplify(tau: PolygonalCurve, ell: int) -> SimplificationResult:
    """Simplify ``tau`` to at most ``ell`` vertices, 4-approximately
    minimizing the Frechet error.

    Ties among equal-error results are broken toward fewer vertices, then
    the lexicographically smallest vertex-index sequence.
    """
    if ell < 1:
        raise InvalidInputError(f"ell must be >= 1, got {ell}")
    if ell == 1:
        return _simplify_to_point(tau)
    m = len(tau)
    if m <= ell:
        return SimplificationResult(tau, 0.0)

    V = tau.vertices
    E = _kernels.shortcut_errors(V)

    # Minimax path value with at most ell-1 edges: layered relaxation.
    reach = E[0, :].copy()
    best_val = reach[m - 1]
    for _ in range(ell - 2):
        reach = np.min(np.maximum(reach[:, None], E), axis=0)
        if reach[m - 1] < best_val:
            best_val = reach[m - 1]
    # The minimax value is one of the entries of E, propagated through
    # min/max without arithmetic, so exact comparisons below are safe.

    # Fewest edges at that error: hop counts toward the last vertex.
    hops = np.full(m, m + 1, dtype=np.int64)
    hops[m - 1] = 0
    for i in range(m - 2, -1, -1):
        ok = E[i, i + 1 :] <= best_val
        if np.any(ok):
            hops[i] = 1 + int(np.min(hops[i + 1 :][ok]))

    # Lexicographically smallest index sequence with exactly hops[0] edges.
    seq = [0]
    cur = 0
    rem = int(hops[0])
    while cur != m - 1:
        nxt = -1
        for j in range(cur + 1, m):
            if E[cur, j] <= best_val and hops[j] == rem - 1:
                nxt = j
                break
        seq.append(nxt)
        cur = nxt
        rem -= 1

    curve = normalize(V[np.array(seq)], id=tau.id)
    return SimplificationResult(curve, frechet_distance(tau, curve))


def simplify_all(
    T: CurveDataset | Sequence[PolygonalCurve], ell: int, threads: int = 1
) -> list[SimplificationResult]:
    """Element-wise :func:`simplify`, order preserved."""
    curves = list(T)
    if threads > 1 and len(curves) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda c: simplify(c, ell), curves))
    return [simplify(c, ell) for c in curves]
