"""scikit-learn style estimators wrapping the functional core.

The estimators follow the sklearn contract: constructor arguments are
stored verbatim (so ``get_params`` / ``set_params`` / ``clone`` work),
validation happens in ``fit``, and fitted state lives in trailing-
underscore attributes.  Inputs are curve collections as accepted by
:func:`curvemedian.validation.check_curves`; raw vertex arrays are fine.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .clustering import cost, kl_median_constant_factor, voronoi_partition
from .coreset import build_coreset
from .median1 import Median1Config, one_median_5eps
from .validation import check_curves, check_positive_int, check_random_state


class KLMedian(ClusterMixin, BaseEstimator):
    """Constant-factor median clustering with complexity-bounded centers.

    Parameters
    ----------
    n_clusters : int
        Number of center curves.
    ell : int
        Complexity bound of each center curve.
    mode : {"exhaustive", "local_search"}
        Inner discrete solver; exhaustive is exact for the discrete
        problem but scans all ``C(n, k)`` subsets.
    threads : int
        Worker threads for distance batches (results are independent of
        this).

    Attributes
    ----------
    cluster_centers_ : list of ndarray
        Vertex arrays of the fitted centers.
    labels_ : ndarray
        Nearest-center index per training curve (ties to lowest index).
    inertia_ : float
        Summed distance of training curves to their centers.
    approx_factor_ : float
        Factor declared by the solving pipeline.
    """

    def __init__(self, n_clusters=1, ell=2, mode="exhaustive", threads=1):
        self.n_clusters = n_clusters
        self.ell = ell
        self.mode = mode
        self.threads = threads

    def fit(self, X, y=None):
        ds = check_curves(X)
        k = check_positive_int(self.n_clusters, "n_clusters")
        ell = check_positive_int(self.ell, "ell")
        result = kl_median_constant_factor(
            ds, k, ell, mode=self.mode, threads=self.threads
        )
        self.result_ = result
        self.cluster_centers_ = [np.asarray(c.vertices) for c in result.centers]
        self.centers_ = list(result.centers.centers)
        self.labels_ = result.assignment
        self.inertia_ = result.total_cost
        self.cluster_costs_ = result.cluster_costs
        self.approx_factor_ = result.approx_factor
        return self

    def predict(self, X):
        ds = check_curves(X, dim=self.centers_[0].dim)
        part = voronoi_partition(ds, self.centers_, threads=self.threads)
        return part.assignment

    def score(self, X, y=None):
        ds = check_curves(X, dim=self.centers_[0].dim)
        return -cost(ds, self.centers_, threads=self.threads)


class CoresetSampler(BaseEstimator):
    """Weighted coreset construction by sensitivity sampling.

    ``fit`` computes the sensitivity profile and draws the sample;
    ``fit_sample`` additionally returns ``(curves, weights)``.  With
    ``sample_size=None`` the (conservative) theoretical schedule is used.
    """

    def __init__(
        self,
        n_clusters=1,
        ell=2,
        epsilon=0.1,
        delta=0.1,
        sample_size=None,
        random_state=None,
        mode="exhaustive",
        c_sample=1.0,
        threads=1,
    ):
        self.n_clusters = n_clusters
        self.ell = ell
        self.epsilon = epsilon
        self.delta = delta
        self.sample_size = sample_size
        self.random_state = random_state
        self.mode = mode
        self.c_sample = c_sample
        self.threads = threads

    def fit(self, X, y=None):
        ds = check_curves(X)
        seed = check_random_state(self.random_state)
        ws = build_coreset(
            ds,
            check_positive_int(self.n_clusters, "n_clusters"),
            check_positive_int(self.ell, "ell"),
            self.epsilon,
            self.delta,
            self.sample_size,
            seed,
            mode=self.mode,
            c_sample=self.c_sample,
            threads=self.threads,
        )
        self.coreset_ = ws
        self.profile_ = ws.profile
        self.sensitivities_ = ws.profile.gamma
        self.sample_indices_ = np.asarray(ws.metadata["indices"])
        self.sample_weights_ = ws.weights
        self.random_seed_ = seed
        return self

    def fit_sample(self, X, y=None):
        self.fit(X)
        return list(self.coreset_.curves), np.asarray(self.coreset_.weights)


class OneMedianApprox(BaseEstimator):
    """Accelerated approximate 1-median with a ``2*ell - 2`` vertex center.

    ``fit`` stores the winning curve in ``center_`` and the run trace in
    ``trace_``; ``score`` is the negative summed distance, so larger is
    better, matching the sklearn convention.
    """

    def __init__(
        self,
        ell=2,
        epsilon=0.5,
        delta=0.2,
        random_state=None,
        candidate_cap=5 * 10**9,
        cell_cap=10**8,
        coreset_size=None,
        c_sample=1.0,
        threads=1,
    ):
        self.ell = ell
        self.epsilon = epsilon
        self.delta = delta
        self.random_state = random_state
        self.candidate_cap = candidate_cap
        self.cell_cap = cell_cap
        self.coreset_size = coreset_size
        self.c_sample = c_sample
        self.threads = threads

    def fit(self, X, y=None):
        ds = check_curves(X)
        seed = check_random_state(self.random_state)
        cfg = Median1Config(
            epsilon=self.epsilon,
            delta=self.delta,
            ell=check_positive_int(self.ell, "ell"),
            rng_seed=seed,
            candidate_cap=self.candidate_cap,
            cell_cap=self.cell_cap,
            coreset_size=self.coreset_size,
            c_sample=self.c_sample,
            threads=self.threads,
        )
        winner, trace = one_median_5eps(ds, cfg)
        self.center_ = np.asarray(winner.vertices)
        self.center_curve_ = winner
        self.trace_ = trace
        self.coreset_cost_ = trace.winner_coreset_cost
        self.random_seed_ = seed
        return self

    def score(self, X, y=None):
        ds = check_curves(X, dim=self.center_curve_.dim)
        return -cost(ds, [self.center_curve_], threads=self.threads)
