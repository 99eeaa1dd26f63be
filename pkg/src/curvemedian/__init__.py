"""Median clustering of polygonal curves under the continuous Frechet
distance, with sensitivity-sampling coresets and an accelerated
approximate 1-median."""

from .clustering import (
    CenterSet,
    ClusteringResult,
    cost,
    discrete_kmedian,
    kl_median_constant_factor,
    one_median_bootstrap,
    voronoi_partition,
    weighted_cost,
)
from .coreset import (
    CoresetErrorStats,
    SensitivityProfile,
    build_coreset,
    coreset_error,
    default_coreset_size,
    sample_coreset,
    sensitivity_profile,
    total_sensitivity_bound,
)
from .curves import (
    CurveDataset,
    PolygonalCurve,
    WeightedCurveSet,
    load_dataset,
    load_weighted_set,
    normalize,
    save_dataset,
    save_weighted_set,
)
from .errors import (
    CapacityError,
    CurveMedianError,
    InvalidInputError,
    ParseError,
    VerificationError,
)
from .estimators import CoresetSampler, KLMedian, OneMedianApprox
from .frechet import (
    DistanceQueryOptions,
    discrete_frechet,
    frechet_decide,
    frechet_distance,
    pairwise_distances,
    segment_curve_distance,
)
from .geometry import Ball, grid_cover_ball, grid_point
from .median1 import (
    Median1Config,
    Median1Trace,
    enumerate_candidate_curves,
    one_median_5eps,
    rank_by_sample,
    shortcut_candidates,
)
from .simplify import SimplificationResult, simplify, simplify_all

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "CapacityError",
    "CenterSet",
    "ClusteringResult",
    "CoresetErrorStats",
    "CoresetSampler",
    "CurveDataset",
    "CurveMedianError",
    "DistanceQueryOptions",
    "InvalidInputError",
    "KLMedian",
    "Median1Config",
    "Median1Trace",
    "OneMedianApprox",
    "ParseError",
    "PolygonalCurve",
    "SensitivityProfile",
    "SimplificationResult",
    "VerificationError",
    "WeightedCurveSet",
    "build_coreset",
    "coreset_error",
    "cost",
    "default_coreset_size",
    "discrete_frechet",
    "discrete_kmedian",
    "enumerate_candidate_curves",
    "frechet_decide",
    "frechet_distance",
    "grid_cover_ball",
    "grid_point",
    "kl_median_constant_factor",
    "load_dataset",
    "load_weighted_set",
    "normalize",
    "one_median_5eps",
    "one_median_bootstrap",
    "pairwise_distances",
    "rank_by_sample",
    "sample_coreset",
    "save_dataset",
    "save_weighted_set",
    "segment_curve_distance",
    "sensitivity_profile",
    "shortcut_candidates",
    "simplify",
    "simplify_all",
    "total_sensitivity_bound",
    "voronoi_partition",
    "weighted_cost",
]
