"""Sensitivity-sampling coresets for curve median clustering.

Given an approximate clustering with declared factor ``alpha``, each input
curve gets a sensitivity upper bound built from its Voronoi cell: with
``k'`` nonempty cells, cell cost ``cost_i``, cell size ``n_i``, total cost
``total`` and per-curve distance ``rho_j`` to the assigned center,

    gamma_j = (1 + sqrt(2k'/(3 alpha))) * (alpha*rho_j/total
              + 2*alpha*cost_i/(total*n_i))
              + (1 + sqrt(3 alpha/(2k'))) * 2/n_i

and their sum collapses exactly to ``2k' + 2*sqrt(6 alpha k') + 3 alpha``.
The bounds are rounded up to powers of two and to integer multiples of
``1/n`` (``lambda``), normalized into sampling probabilities ``psi``, and a
weighted i.i.d. sample with weights ``Lambda / (|S| * lambda_j)`` is an
unbiased cost estimator that concentrates into a relative-error coreset.

Sampling is reproducible through a counter-based generator: draw ``t``
uses the top 53 bits of ``Philox(key=(seed, t)).random_raw()``, one
substream per draw index, so samples are independent of draw order and
batch size.
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass

import numpy as np

from .clustering import (
    ClusteringResult,
    cost,
    kl_median_constant_factor,
    one_median_bootstrap,
    weighted_cost,
)
from .curves import CurveDataset, WeightedCurveSet
from .errors import InvalidInputError
from .frechet import DistanceQueryOptions

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SensitivityProfile:
    """Per-curve sensitivity bounds and the derived sampling scheme.

    Invariants (all checked by the test suite):

    * ``gamma <= lam <= 2*gamma + 1/n`` elementwise,
    * ``n * lam`` integral (``lam_numerators`` stores the exact integers),
    * ``psi`` sums to 1,
    * with a positive-cost source and no dropped cells,
      ``sum(gamma) == 2k' + 2*sqrt(6*alpha*k') + 3*alpha`` exactly.
    """

    gamma: np.ndarray
    lam: np.ndarray
    lam_numerators: np.ndarray
    psi: np.ndarray
    total_gamma: float
    total_lambda: float
    alpha: float
    k_prime: int
    source: ClusteringResult
    degenerate: bool = False

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.gamma.tobytes())
        h.update(self.lam_numerators.tobytes())
        return h.hexdigest()[:16]


def total_sensitivity_bound(k_prime: int, alpha: float) -> float:
    """Closed form of the summed per-curve bounds."""
    return 2.0 * k_prime + 2.0 * math.sqrt(6.0 * alpha * k_prime) + 3.0 * alpha


def _lambda_from_gamma(gamma: np.ndarray, n: int):
    nums = np.empty(n, dtype=np.int64)
    for j, g in enumerate(gamma):
        if not (g > 0 and math.isfinite(g)):
            raise InvalidInputError(f"sensitivity bound {g} out of range")
        e = math.ceil(math.log2(g))
        if 2.0**e < g:  # float log2 can land one step low at powers of two
            e += 1
        nums[j] = math.ceil(n * 2.0**e)
    lam = nums / n
    return lam, nums


def sensitivity_profile(T: CurveDataset, approx: ClusteringResult) -> SensitivityProfile:
    """Sensitivity bounds for every curve of ``T`` w.r.t. an approximate
    clustering covering ``T``.

    Empty Voronoi cells are dropped (``k_prime`` counts nonempty cells
    only).  A zero-cost clustering means all inputs are equidistant from
    every center set; the profile degenerates to uniform bounds that keep
    the closed-form total.
    """
    n = len(T)
    if approx.assignment.shape[0] != n:
        raise InvalidInputError("approximate solution does not cover the dataset")
    alpha = float(approx.approx_factor)
    if alpha < 1.0:
        raise InvalidInputError(f"approx factor must be >= 1, got {alpha}")

    sizes = np.bincount(approx.assignment, minlength=approx.k)
    nonempty = sizes > 0
    k_prime = int(np.count_nonzero(nonempty))
    total = float(approx.total_cost)

    if total == 0.0:
        gamma = np.full(n, total_sensitivity_bound(k_prime, alpha) / n)
        degenerate = True
    else:
        cell_cost = approx.cluster_costs
        cell_size = sizes.astype(np.float64)
        a = 1.0 + math.sqrt(2.0 * k_prime / (3.0 * alpha))
        b = 1.0 + math.sqrt(3.0 * alpha / (2.0 * k_prime))
        own = approx.assignment
        gamma = a * (
            alpha * approx.point_costs / total
            + 2.0 * alpha * cell_cost[own] / (total * cell_size[own])
        ) + b * 2.0 / cell_size[own]
        degenerate = False

    lam, nums = _lambda_from_gamma(gamma, n)
    num_total = int(np.sum(nums))
    psi = nums / num_total
    return SensitivityProfile(
        gamma=gamma,
        lam=lam,
        lam_numerators=nums,
        psi=psi,
        total_gamma=float(np.sum(gamma)),
        total_lambda=num_total / n,
        alpha=alpha,
        k_prime=k_prime,
        source=approx,
        degenerate=degenerate,
    )


def _substream_uniform(seed: int, t: int) -> float:
    key = np.array([seed & _MASK64, t & _MASK64], dtype=np.uint64)
    raw = int(np.random.Philox(key=key).random_raw())
    return (raw >> 11) * (1.0 / (1 << 53))


def sample_coreset(
    T: CurveDataset,
    profile: SensitivityProfile,
    size: int,
    rng_seed: int,
    epsilon: float | None = None,
) -> WeightedCurveSet:
    """Draw ``size`` entries i.i.d. with probabilities ``psi`` and attach
    the unbiasedness weights ``Lambda / (size * lambda_j)``."""
    if size < 1:
        raise InvalidInputError(f"coreset size must be >= 1, got {size}")
    n = len(T)
    if profile.n != n:
        raise InvalidInputError("profile does not match the dataset")
    if size > n * 1000:
        logger.warning(
            "coreset size %d exceeds 1000x the dataset size %d; legal but pointless",
            size,
            n,
        )
    cum = np.cumsum(profile.psi)
    cum[-1] = 1.0
    us = np.fromiter(
        (_substream_uniform(rng_seed, t) for t in range(size)),
        dtype=np.float64,
        count=size,
    )
    idx = np.searchsorted(cum, us, side="right")
    idx = np.minimum(idx, n - 1)
    num_total = int(np.sum(profile.lam_numerators))
    weights = num_total / (size * profile.lam_numerators[idx].astype(np.float64))
    metadata = {
        "seed": int(rng_seed),
        "n": n,
        "sample_size": int(size),
        "epsilon": epsilon,
        "Gamma": profile.total_gamma,
        "Lambda": profile.total_lambda,
        "alpha_hat": profile.alpha,
        "k_prime": profile.k_prime,
        "profile_hash": profile.content_hash(),
        "indices": [int(i) for i in idx],
    }
    return WeightedCurveSet(
        [T[int(i)] for i in idx],
        weights,
        epsilon=epsilon,
        metadata=metadata,
        profile=profile,
    )


def default_coreset_size(
    n: int,
    d: int,
    m: int,
    k: int,
    ell: int,
    epsilon: float,
    delta: float,
    c_sample: float = 1.0,
) -> int:
    """Sample-size schedule; ``c_sample`` scales the hidden constant.

    ``ceil(k * eps^-2 * (d^2 l^2 k ln(d l m) ln(k n) ln(k)^2 + ln(2/d)))``
    with natural logs (the power-of-two exponent in the rounding scheme is
    the only base-2 log in this module).
    """
    lead = (
        d * d * ell * ell * k
        * math.log(d * ell * m)
        * math.log(k * n)
        * math.log(k) ** 2
    )
    raw = math.ceil(k / (epsilon * epsilon) * (lead + math.log(2.0 / delta)))
    return max(1, math.ceil(c_sample * raw))


def build_coreset(
    T: CurveDataset,
    k: int,
    ell: int,
    epsilon: float,
    delta: float,
    sample_size_override: int | None = None,
    rng_seed: int = 0,
    *,
    mode: str = "exhaustive",
    c_sample: float = 1.0,
    profile: SensitivityProfile | None = None,
    opts: DistanceQueryOptions | None = None,
    threads: int = 1,
) -> WeightedCurveSet:
    """End-to-end coreset construction.

    Computes a bootstrap clustering (best single simplification for
    ``k = 1``, the simplify-then-discrete-solve pipeline otherwise), the
    sensitivity profile, and the weighted sample.  A precomputed
    ``profile`` skips the bootstrap; ``sample_size_override`` replaces the
    theoretical schedule, which is impractically conservative at small
    scales.
    """
    if not 0.0 < epsilon < 1.0:
        raise InvalidInputError(f"epsilon must be in (0, 1), got {epsilon}")
    if not 0.0 < delta < 1.0:
        raise InvalidInputError(f"delta must be in (0, 1), got {delta}")
    if profile is None:
        if k == 1:
            approx = one_median_bootstrap(T, ell, opts=opts, threads=threads)
        else:
            approx = kl_median_constant_factor(
                T, k, ell, delta, mode=mode, opts=opts, threads=threads
            )
        profile = sensitivity_profile(T, approx)
    if sample_size_override is not None:
        size = int(sample_size_override)
    else:
        size = default_coreset_size(
            len(T), T.dim, T.max_complexity, k, ell, epsilon, delta, c_sample
        )
    ws = sample_coreset(T, profile, size, rng_seed, epsilon=epsilon)
    ws.metadata.update({"k": k, "ell": ell, "delta": delta})
    return ws


@dataclass(frozen=True)
class CoresetErrorStats:
    """Relative cost errors of a weighted set against the full dataset."""

    costs: np.ndarray
    weighted_costs: np.ndarray
    rel_errors: np.ndarray

    @property
    def max_error(self) -> float:
        return float(np.max(self.rel_errors))

    @property
    def mean_error(self) -> float:
        return float(np.mean(self.rel_errors))

    @property
    def median_error(self) -> float:
        return float(np.median(self.rel_errors))


def coreset_error(
    T: CurveDataset,
    S: WeightedCurveSet,
    center_sets,
    opts: DistanceQueryOptions | None = None,
    threads: int = 1,
) -> CoresetErrorStats:
    """Measure ``|pcost - cost| / cost`` over a battery of center sets.

    Zero-cost center sets count as error 0 when the weighted cost is also
    zero and as ``inf`` otherwise.
    """
    costs = np.empty(len(center_sets))
    pcosts = np.empty(len(center_sets))
    for i, C in enumerate(center_sets):
        costs[i] = cost(T, C, opts, threads)
        pcosts[i] = weighted_cost(S, C, opts, threads)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.abs(pcosts - costs) / costs
    rel = np.where(costs == 0.0, np.where(pcosts == 0.0, 0.0, np.inf), rel)
    return CoresetErrorStats(costs=costs, weighted_costs=pcosts, rel_errors=rel)
