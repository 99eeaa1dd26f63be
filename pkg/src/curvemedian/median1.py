"""Coreset-accelerated approximate 1-median for curve sets.

Pipeline (:func:`one_median_5eps`): bootstrap a constant-factor 1-median,
build a coreset tuned for centers of complexity ``2*ell - 2``, bracket the
optimal cost from the bootstrap's coreset cost, pick a pivot curve by
ranking a uniform sample against another uniform sample, lay fine grids
over balls around the pivot's vertices, and return the candidate curve
over those grid points that evaluates best against the coreset.  The
output has at most ``2*ell - 2`` vertices and, with the stated sample
sizes, its cost is within a ``5 + epsilon`` factor of the optimal
``ell``-vertex median with constant probability.

Randomness is consumed through three child streams spawned from
``rng_seed`` (coreset / pivot-candidate sample / ranking sample), so runs
are reproducible bit for bit.  Candidate evaluation is deterministic: the
grid points are kept in lexicographic order and ties are broken by
enumeration index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _kernels
from .clustering import one_median_bootstrap, weighted_cost
from .coreset import build_coreset
from .curves import CurveDataset, PolygonalCurve, normalize
from .errors import CapacityError, InvalidInputError
from .frechet import DistanceQueryOptions, pairwise_distances
from .geometry import Ball, bbox_cell_count, grid_cover_ball

#: Scale-down applied to the accuracy target before it is threaded into the
#: coreset, the brackets and the grids; the approximation chain consumes 67
#: epsilon-fractions in total.
EPSILON_SCALE = 67.0


@dataclass(frozen=True)
class Median1Config:
    """Parameters of the accelerated 1-median search."""

    epsilon: float
    delta: float
    ell: int = 2
    rng_seed: int = 0
    candidate_cap: int = 5 * 10**9
    cell_cap: int = 10**8
    coreset_size: int | None = None
    c_sample: float = 1.0
    threads: int = 1

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 0.5:
            raise InvalidInputError(f"epsilon must be in (0, 1/2], got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise InvalidInputError(f"delta must be in (0, 1), got {self.delta}")
        if self.ell < 2:
            raise InvalidInputError(f"ell must be >= 2, got {self.ell}")
        if self.candidate_cap < 1 or self.cell_cap < 1:
            raise InvalidInputError("caps must be positive")


@dataclass
class Median1Trace:
    """Intermediate quantities of one run, emitted as JSON by the CLI.

    ``delta_hat`` is the coreset cost of the bootstrap center; the cost
    brackets satisfy ``delta_upper * (1 - eps') == delta_hat`` and
    ``delta_lower * (1 + eps') * bootstrap_alpha == delta_hat`` exactly.
    """

    epsilon_prime: float
    bootstrap_alpha: float
    delta_hat: float
    delta_upper: float
    delta_lower: float
    coreset_size: int
    pivot_sample_size: int
    ranking_sample_size: int
    ball_radius: float
    cell_width: float
    pivot: PolygonalCurve | None
    grid_points: np.ndarray
    raw_candidate_count: int
    evaluated_candidates: int
    winner: PolygonalCurve | None = None
    winner_coreset_cost: float = math.nan
    short_circuit: bool = False
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "epsilon_prime": self.epsilon_prime,
            "bootstrap_alpha": self.bootstrap_alpha,
            "delta_hat": self.delta_hat,
            "delta_upper": self.delta_upper,
            "delta_lower": self.delta_lower,
            "coreset_size": self.coreset_size,
            "pivot_sample_size": self.pivot_sample_size,
            "ranking_sample_size": self.ranking_sample_size,
            "ball_radius": self.ball_radius,
            "cell_width": self.cell_width,
            "pivot": None if self.pivot is None else [list(map(float, v)) for v in self.pivot.vertices],
            "grid_point_count": int(self.grid_points.shape[0]),
            "grid_points": [list(map(float, v)) for v in self.grid_points],
            "raw_candidate_count": self.raw_candidate_count,
            "evaluated_candidates": self.evaluated_candidates,
            "winner": None if self.winner is None else [list(map(float, v)) for v in self.winner.vertices],
            "winner_coreset_cost": self.winner_coreset_cost,
            "short_circuit": self.short_circuit,
            "metadata": self.metadata,
        }


def rank_by_sample(
    T: CurveDataset,
    S: list[PolygonalCurve],
    W: list[PolygonalCurve],
    opts: DistanceQueryOptions | None = None,
    threads: int = 1,
) -> PolygonalCurve:
    """The element of ``S`` with the smallest summed distance to ``W``.

    ``W`` acts as a cost estimate of the full dataset; with both samples
    uniform and large enough, the winner's true cost is near-minimal among
    ``S`` with high probability.  Ties go to the lowest index in ``S``.
    """
    del T  # samples are already materialized curve lists
    if not S or not W:
        raise InvalidInputError("both samples must be non-empty")
    distinct: dict[bytes, int] = {}
    reps: list[PolygonalCurve] = []
    for s in S:
        if s.key() not in distinct:
            distinct[s.key()] = len(reps)
            reps.append(s)
    wreps: dict[bytes, tuple[PolygonalCurve, int]] = {}
    for w in W:
        k = w.key()
        if k in wreps:
            wreps[k] = (wreps[k][0], wreps[k][1] + 1)
        else:
            wreps[k] = (w, 1)
    wcurves = [v[0] for v in wreps.values()]
    counts = np.array([v[1] for v in wreps.values()], dtype=np.float64)
    D = pairwise_distances(reps, wcurves, opts, threads)
    totals = D @ counts
    return reps[int(np.argmin(totals))]


def shortcut_candidates(
    pivot: PolygonalCurve,
    radius: float,
    cell_width: float,
    *,
    cell_cap: int = 10**8,
) -> np.ndarray:
    """Union of grid covers of the balls around the pivot's vertices.

    Returns the grid points as a lexicographically sorted unique
    ``(n, d)`` array.  ``cell_cap`` bounds the total number of cells
    enumerated across all balls.
    """
    if radius < 0:
        raise InvalidInputError(f"radius must be >= 0, got {radius}")
    remaining = cell_cap
    parts = []
    for v in pivot.vertices:
        ball = Ball(v, radius)
        need = bbox_cell_count(ball, cell_width)
        if need > remaining:
            raise CapacityError(
                f"grid covers need more than {cell_cap} cells in total",
                required=need,
            )
        remaining -= need
        parts.append(grid_cover_ball(ball, cell_width))
    pts = np.vstack(parts)
    return np.unique(pts, axis=0)


def enumerate_candidate_curves(P: np.ndarray, ell: int, *, candidate_cap: int = 5 * 10**9):
    """Stream all candidate curves with ``2*ell - 2`` vertices from ``P``.

    Tuples are enumerated in lexicographic index order over the rows of
    ``P``; consecutive duplicate points collapse at construction, collinear
    triples are normalized away, and candidates that normalize identically
    are deduplicated (first occurrence wins).  Raises
    :class:`CapacityError` when the raw tuple count ``|P|**(2*ell-2)``
    exceeds the cap.
    """
    P = np.asarray(P, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] == 0:
        raise InvalidInputError("P must be a non-empty (n, d) array of grid points")
    if ell < 2:
        raise InvalidInputError(f"ell must be >= 2, got {ell}")
    npts = P.shape[0]
    length = 2 * ell - 2
    raw = npts**length
    if raw > candidate_cap:
        raise CapacityError(
            f"{raw} raw candidates exceed the cap of {candidate_cap}; use a larger "
            "epsilon or a smaller instance",
            required=raw,
        )
    seen: set[bytes] = set()
    for combo in product(range(npts), repeat=length):
        verts = [P[combo[0]]]
        for t in combo[1:]:
            if not np.array_equal(P[t], verts[-1]):
                verts.append(P[t])
        curve = normalize(np.array(verts))
        k = curve.key()
        if k in seen:
            continue
        seen.add(k)
        yield curve


def _weighted_point_sums(P: np.ndarray, anchors: np.ndarray, wsums: np.ndarray) -> np.ndarray:
    # sum_s w_s * ||P - anchor_s|| for every grid point
    total = np.zeros(P.shape[0])
    for a, w in zip(anchors, wsums):
        diff = P - a
        total += w * np.sqrt(np.einsum("ij,ij->i", diff, diff))
    return total


def _best_pair_candidate(P: np.ndarray, reps, wsums: np.ndarray):
    """Exact argmin of the grouped coreset cost over all ordered pairs of
    grid points (diagonal pairs collapse to point curves).

    Candidates whose endpoint-distance lower bound exceeds a proven upper
    bound cannot win (strictly), so only the survivors are evaluated with
    the exact segment distance; ties resolve to the smallest enumeration
    index ``i * |P| + j``.  Returns ``(best_cost, i, j, evaluated)``.
    """
    n = P.shape[0]
    starts = np.array([r.vertices[0] for r in reps])
    ends = np.array([r.vertices[-1] for r in reps])
    F = _weighted_point_sums(P, starts, wsums)  # cost lower bound via first vertices
    G = _weighted_point_sums(P, ends, wsums)

    verts = [np.ascontiguousarray(r.vertices) for r in reps]

    def exact(ii: np.ndarray, jj: np.ndarray) -> np.ndarray:
        A = np.ascontiguousarray(P[ii])
        B = np.ascontiguousarray(P[jj])
        tot = np.zeros(ii.shape[0])
        out = np.empty(ii.shape[0])
        for U, w in zip(verts, wsums):
            _kernels.segment_distance_batch(A, B, U, out)
            tot += w * out
        return tot

    # Upper-bound seeding: a coarse index subgrid plus the two marginal
    # argmins.  Seeds only tighten the bound; the sweep re-finds the winner.
    step = max(1, n // 128)
    seed_idx = np.unique(
        np.concatenate([np.arange(0, n, step), [n - 1, int(np.argmin(F)), int(np.argmin(G))]])
    )
    si, sj = np.meshgrid(seed_idx, seed_idx, indexing="ij")
    ub = float(np.min(exact(si.reshape(-1), sj.reshape(-1))))

    best_cost = math.inf
    best_i = -1
    best_j = -1
    evaluated = 0
    rows_per_block = max(1, int(4_000_000 // max(1, n)))
    refine_above = 200_000
    chunk = 1_000_000
    for r0 in range(0, n, rows_per_block):
        r1 = min(n, r0 + rows_per_block)
        lb = np.maximum(F[r0:r1, None], G[None, :])
        ii, jj = np.nonzero(lb <= ub)
        if ii.shape[0] == 0:
            continue
        ii = ii + r0
        if ii.shape[0] > refine_above:
            # second-stage bound: per-curve max of the two endpoint terms
            lb2 = np.zeros(ii.shape[0])
            A = P[ii]
            B = P[jj]
            for s, e, w in zip(starts, ends, wsums):
                da = np.sqrt(np.einsum("ij,ij->i", A - s, A - s))
                db = np.sqrt(np.einsum("ij,ij->i", B - e, B - e))
                lb2 += w * np.maximum(da, db)
            keep = lb2 <= ub
            ii = ii[keep]
            jj = jj[keep]
            if ii.shape[0] == 0:
                continue
        for c0 in range(0, ii.shape[0], chunk):
            ci = ii[c0 : c0 + chunk]
            cj = jj[c0 : c0 + chunk]
            costs = exact(ci, cj)
            evaluated += ci.shape[0]
            t = int(np.argmin(costs))
            c = float(costs[t])
            if c < best_cost:
                best_cost = c
                best_i = int(ci[t])
                best_j = int(cj[t])
            if c < ub:
                ub = c
    return best_cost, best_i, best_j, evaluated


def _sample_sizes(epsilon_prime: float, delta: float) -> tuple[int, int]:
    log_term = math.log(delta) - math.log(4.0)
    size_s = math.ceil(-2.0 / epsilon_prime * log_term)
    inner = math.ceil(-8.0 / epsilon_prime * log_term)
    size_w = math.ceil(-64.0 / epsilon_prime**2 * (math.log(delta) - math.log(inner)))
    return size_s, size_w


def one_median_5eps(
    T: CurveDataset, cfg: Median1Config
) -> tuple[PolygonalCurve, Median1Trace]:
    """Approximate 1-median with at most ``2*ell - 2`` vertices.

    Deterministic given ``(T, cfg)``; see the module docstring for the
    pipeline.  A zero bootstrap cost short-circuits: the grids would have
    zero radius and width, and the bootstrap center is already exact.
    """
    n = len(T)
    d = T.dim
    eps_p = cfg.epsilon / EPSILON_SCALE
    ell2 = 2 * cfg.ell - 2

    root = np.random.SeedSequence(cfg.rng_seed)
    ss_core, ss_pivot, ss_rank = root.spawn(3)

    boot = one_median_bootstrap(T, cfg.ell, threads=cfg.threads)
    c_hat = boot.centers[0]

    coreset = build_coreset(
        T,
        1,
        ell2,
        eps_p,
        cfg.delta / 4.0,
        cfg.coreset_size,
        int(ss_core.generate_state(1, dtype=np.uint64)[0]),
        c_sample=cfg.c_sample,
        threads=cfg.threads,
    )
    delta_hat = weighted_cost(coreset, [c_hat], threads=cfg.threads)

    size_s, size_w = _sample_sizes(eps_p, cfg.delta)

    if delta_hat == 0.0:
        trace = Median1Trace(
            epsilon_prime=eps_p,
            bootstrap_alpha=boot.approx_factor,
            delta_hat=0.0,
            delta_upper=0.0,
            delta_lower=0.0,
            coreset_size=len(coreset),
            pivot_sample_size=size_s,
            ranking_sample_size=size_w,
            ball_radius=0.0,
            cell_width=0.0,
            pivot=None,
            grid_points=np.empty((0, d)),
            raw_candidate_count=0,
            evaluated_candidates=0,
            winner=c_hat,
            winner_coreset_cost=0.0,
            short_circuit=True,
        )
        return c_hat, trace

    delta_upper = delta_hat / (1.0 - eps_p)
    delta_lower = delta_hat / ((1.0 + eps_p) * boot.approx_factor)

    rng_s = np.random.default_rng(ss_pivot)
    idx_s = rng_s.integers(0, n, size=size_s)
    rng_w = np.random.default_rng(ss_rank)
    counts_w = np.bincount(rng_w.integers(0, n, size=size_w), minlength=n)

    # Rank the distinct pivot candidates by their cost on the ranking
    # sample; ties go to the earliest position in the sample.
    distinct: dict[int, None] = {}
    for i in idx_s:
        distinct.setdefault(int(i), None)
    cand_idx = list(distinct.keys())
    active = np.nonzero(counts_w > 0)[0]
    D = pairwise_distances(
        [T[i] for i in cand_idx], [T[int(j)] for j in active], threads=cfg.threads
    )
    totals = D @ counts_w[active].astype(np.float64)
    pivot = T[cand_idx[int(np.argmin(totals))]]

    radius = (3.0 + 4.0 * eps_p) * delta_upper / n
    width = eps_p * delta_lower / (n * math.sqrt(d))
    P = shortcut_candidates(pivot, radius, width, cell_cap=cfg.cell_cap)

    raw = P.shape[0] ** ell2
    if raw > cfg.candidate_cap:
        raise CapacityError(
            f"{raw} raw candidates exceed the cap of {cfg.candidate_cap}; use a "
            "larger epsilon or a smaller instance",
            required=raw,
        )

    reps, wsums = coreset.grouped()
    if ell2 == 2:
        best_cost, bi, bj, evaluated = _best_pair_candidate(P, reps, wsums)
        if bi == bj:
            winner = PolygonalCurve(P[bi].reshape(1, -1))
        else:
            winner = PolygonalCurve(np.array([P[bi], P[bj]]))
    else:
        best_cost = math.inf
        winner = None
        evaluated = 0
        for cand in enumerate_candidate_curves(P, cfg.ell, candidate_cap=cfg.candidate_cap):
            c = weighted_cost(coreset, [cand], threads=cfg.threads)
            evaluated += 1
            if c < best_cost:
                best_cost = c
                winner = cand

    trace = Median1Trace(
        epsilon_prime=eps_p,
        bootstrap_alpha=boot.approx_factor,
        delta_hat=delta_hat,
        delta_upper=delta_upper,
        delta_lower=delta_lower,
        coreset_size=len(coreset),
        pivot_sample_size=size_s,
        ranking_sample_size=size_w,
        ball_radius=radius,
        cell_width=width,
        pivot=pivot,
        grid_points=P,
        raw_candidate_count=raw,
        evaluated_candidates=evaluated,
        winner=winner,
        winner_coreset_cost=best_cost,
        short_circuit=False,
        metadata={"coreset": coreset.metadata},
    )
    return winner, trace
