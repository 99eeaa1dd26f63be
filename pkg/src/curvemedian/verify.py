"""Self-verification suites: run the brute-force oracles against the fast
paths on bundled synthetic fixtures and report measured quantities.

Each check returns a record ``{suite, name, passed, measured, bound}``;
the CLI emits the collected records as JSON and fails with a dedicated
exit code when any check is red.  These are scaled-down versions of the
acceptance battery in ``tests/test_acceptance.py``, sized to finish in
seconds.
"""

from __future__ import annotations

import math

import numpy as np

from .clustering import cost, discrete_kmedian, one_median_bootstrap, weighted_cost
from .coreset import sample_coreset, sensitivity_profile, total_sensitivity_bound
from .curves import CurveDataset, normalize
from .frechet import (
    DistanceQueryOptions,
    discrete_frechet,
    frechet_decide,
    frechet_distance,
    _distance_bisection,
)
from .generator import random_center_sets, synthetic_clusters
from .median1 import Median1Config, one_median_5eps
from .oracles import (
    empirical_sensitivity,
    exhaustive_subsequence_optimum,
    grid_one_median,
    refinement_frechet,
)
from .simplify import simplify

SUITES = ("frechet", "simplify", "sensitivity", "coreset", "median1")


def _check(suite, name, passed, measured, bound):
    return {
        "suite": suite,
        "name": name,
        "passed": bool(passed),
        "measured": float(measured) if measured is not None else None,
        "bound": float(bound) if bound is not None else None,
    }


def _random_curves(rng, count, d_range=(1, 3), m_range=(2, 8), scale=1.0):
    out = []
    while len(out) < count:
        d = int(rng.integers(d_range[0], d_range[1] + 1))
        m = int(rng.integers(m_range[0], m_range[1] + 1))
        c = normalize(rng.normal(scale=scale, size=(m, d)))
        out.append(c)
    return out


def suite_frechet(fast: bool = True):
    checks = []
    rng = np.random.default_rng(2024)
    # hand pairs with closed-form values
    seg = lambda a, b: normalize([a, b])  # noqa: E731
    pairs = [
        (seg((0, 0), (1, 0)), seg((0, 1), (1, 1)), 1.0),
        (normalize([[0.0]]), normalize([[3.0]]), 3.0),
        (seg((0, 0), (2, 0)), normalize([(0, 0), (1, 1), (2, 0)]), 1.0),
        (seg((0.0,), (1.0,)), normalize([(0.0,), (0.5,), (0.0,), (1.0,)]), 0.25),
    ]
    worst = 0.0
    for a, b, want in pairs:
        got = frechet_distance(a, b)
        worst = max(worst, abs(got - want) / want)
    checks.append(_check("frechet", "hand_pairs_relative_error", worst <= 1e-6, worst, 1e-6))

    n_pairs = 150 if fast else 1000
    sym_ok = True
    sandwich_ok = True
    mono_ok = True
    agree = 0.0
    for _ in range(n_pairs):
        a, b = _random_curves(rng, 2)
        if a.dim != b.dim:
            b = normalize(rng.normal(size=(len(b), a.dim)))
        v = frechet_distance(a, b)
        sym_ok &= v == frechet_distance(b, a)
        L = max(
            float(np.linalg.norm(a.vertices[0] - b.vertices[0])),
            float(np.linalg.norm(a.vertices[-1] - b.vertices[-1])),
        )
        U = discrete_frechet(a, b)
        sandwich_ok &= L - 1e-12 <= v <= U + 1e-12
        mono_ok &= (not frechet_decide(a, b, 0.5 * v)) or frechet_decide(a, b, v + abs(v))
        if len(a) == 2 or len(b) == 2:
            vb = _distance_bisection(a, b, DistanceQueryOptions(rel_tol=1e-12))
            agree = max(agree, abs(v - vb) / max(vb, 1e-30))
    checks.append(_check("frechet", "symmetry_exact", sym_ok, 0.0 if sym_ok else 1.0, 0.0))
    checks.append(_check("frechet", "lower_upper_sandwich", sandwich_ok, None, None))
    checks.append(_check("frechet", "closed_form_vs_bisection", agree <= 1e-9, agree, 1e-9))

    # refinement oracle agreement on a few pairs
    worst = 0.0
    for _ in range(10):
        a, b = _random_curves(rng, 2, d_range=(1, 2), m_range=(2, 5))
        if a.dim != b.dim:
            b = normalize(rng.normal(size=(len(b), a.dim)))
        v = frechet_distance(a, b)
        vr = refinement_frechet(a, b, pieces=150)
        worst = max(worst, (v - vr) / max(vr, 1e-12))  # v must not exceed oracle
    checks.append(_check("frechet", "refinement_oracle_upper", worst <= 1e-9, worst, 1e-9))
    return checks


def suite_simplify(fast: bool = True):
    checks = []
    rng = np.random.default_rng(7)
    n_curves = 40 if fast else 200
    worst_ratio = 0.0
    subseq_ok = True
    for _ in range(n_curves):
        d = int(rng.integers(1, 3))
        m = int(rng.integers(4, 9))
        tau = normalize(rng.normal(size=(m, d)))
        if len(tau) < 3:
            continue
        ell = int(rng.integers(2, len(tau)))
        res = simplify(tau, ell)
        opt = exhaustive_subsequence_optimum(tau, ell)
        if opt > 1e-12:
            worst_ratio = max(worst_ratio, res.error / opt)
        else:
            subseq_ok &= res.error <= 1e-9
        keys = {tuple(v) for v in tau.vertices}
        subseq_ok &= all(tuple(v) in keys for v in res.curve.vertices)
        subseq_ok &= np.array_equal(res.curve.vertices[0], tau.vertices[0])
        subseq_ok &= np.array_equal(res.curve.vertices[-1], tau.vertices[-1])
    checks.append(_check("simplify", "four_factor_vs_subsequence_optimum", worst_ratio <= 4.0 + 1e-6, worst_ratio, 4.0))
    checks.append(_check("simplify", "vertex_subsequence_property", subseq_ok, None, None))
    return checks


def suite_sensitivity(fast: bool = True):
    checks = []
    rng = np.random.default_rng(11)
    # closed-form total
    n_instances = 50 if fast else 500
    worst = 0.0
    for _ in range(n_instances):
        k = int(rng.integers(1, 4))
        ds, _ = synthetic_clusters(
            k, int(rng.integers(2, 5)), (2, 4), d=int(rng.integers(1, 3)),
            separation=5.0, noise=0.2, seed=int(rng.integers(2**31)),
        )
        approx = discrete_kmedian(ds, k, "exhaustive")
        if approx.total_cost == 0:
            continue
        prof = sensitivity_profile(ds, approx)
        want = total_sensitivity_bound(prof.k_prime, prof.alpha)
        worst = max(worst, abs(prof.total_gamma - want) / want)
        lam_ok = np.all(prof.gamma <= prof.lam + 1e-12) and np.all(
            prof.lam <= 2 * prof.gamma + 1.0 / prof.n + 1e-12
        )
        if not lam_ok:
            checks.append(_check("sensitivity", "lambda_envelope", False, None, None))
            return checks
    checks.append(_check("sensitivity", "total_closed_form_rel_err", worst <= 1e-9, worst, 1e-9))

    # upper bound vs randomized oracle on tiny 1-d instances
    n_inst = 6 if fast else 100
    n_sets = 2 * 10**4 if fast else 10**5
    ok = True
    margin = math.inf
    for t in range(n_inst):
        ds, _ = synthetic_clusters(
            2, 3, (2, 3), d=1, separation=4.0, noise=0.4, seed=100 + t
        )
        approx = one_median_bootstrap(ds, 2)
        prof = sensitivity_profile(ds, approx)
        emp = empirical_sensitivity(ds, k=1, n_sets=n_sets, seed=t)
        ok &= bool(np.all(prof.gamma >= emp - 1e-12))
        margin = min(margin, float(np.min(prof.gamma - emp)))
    checks.append(_check("sensitivity", "gamma_dominates_empirical", ok, margin, 0.0))
    return checks


def suite_coreset(fast: bool = True):
    checks = []
    ds, _ = synthetic_clusters(3, 20, (3, 6), d=2, separation=20.0, noise=0.2, seed=3)
    approx = discrete_kmedian(ds, 3, "local_search")
    prof = sensitivity_profile(ds, approx)
    centers = approx.centers

    # degenerate: identical curves -> exact for any center set
    same = CurveDataset([normalize([(0.0, 0.0), (1.0, 1.0)], id=str(i)) for i in range(6)])
    dapprox = one_median_bootstrap(same, 2)
    dprof = sensitivity_profile(same, dapprox)
    dws = sample_coreset(same, dprof, 4, rng_seed=1)
    battery = random_center_sets(same, 1, 2, 10, seed=5)
    deg_err = max(
        abs(weighted_cost(dws, C) - cost(same, C)) / max(cost(same, C), 1e-30)
        for C in battery
    )
    checks.append(_check("coreset", "degenerate_exactness", deg_err <= 1e-9, deg_err, 1e-9))

    # unbiasedness at a fixed center set
    reps = 100 if fast else 500
    size = 40
    full = cost(ds, centers)
    vals = np.array(
        [weighted_cost(sample_coreset(ds, prof, size, rng_seed=s), centers) for s in range(reps)]
    )
    se = vals.std(ddof=1) / math.sqrt(reps)
    dev = abs(vals.mean() - full) / max(se, 1e-30)
    checks.append(_check("coreset", "unbiased_within_4se", dev <= 4.0, dev, 4.0))

    # relative error on a battery
    battery = random_center_sets(ds, 3, 4, 60, seed=17)
    ws = sample_coreset(ds, prof, 120, rng_seed=23)
    errs = []
    for C in battery:
        c = cost(ds, C)
        p = weighted_cost(ws, C)
        errs.append(abs(p - c) / c)
    checks.append(_check("coreset", "battery_max_rel_error", max(errs) <= 0.5, max(errs), 0.5))
    return checks


def suite_median1(fast: bool = True):
    checks = []
    # zero-cost short circuit
    same = CurveDataset([normalize([(0.0,), (2.0,)], id=str(i)) for i in range(5)])
    cfg = Median1Config(epsilon=0.5, delta=0.2, ell=2, rng_seed=1)
    winner, trace = one_median_5eps(same, cfg)
    checks.append(
        _check("median1", "zero_cost_short_circuit", trace.short_circuit and cost(same, [winner]) == 0.0, 0.0, 0.0)
    )

    # end-to-end factor vs the dense grid oracle
    ds, _ = synthetic_clusters(1, 12, (2, 5), d=1, separation=2.0, noise=0.3, walk_scale=1.2, seed=9)
    cfg = Median1Config(epsilon=0.5, delta=0.2, ell=2, rng_seed=5, coreset_size=500)
    winner, trace = one_median_5eps(ds, cfg)
    full = cost(ds, [winner])
    opt, _, _ = grid_one_median(ds, target=100)
    ratio = full / opt if opt > 0 else 1.0
    checks.append(_check("median1", "factor_vs_grid_oracle", ratio <= 5.5, ratio, 5.5))

    # trace bracket identities
    ok = (
        trace.delta_upper * (1 - trace.epsilon_prime) == trace.delta_hat
        and abs(trace.delta_lower * (1 + trace.epsilon_prime) * trace.bootstrap_alpha - trace.delta_hat)
        <= 1e-12 * max(1.0, trace.delta_hat)
    )
    checks.append(_check("median1", "bracket_identities", ok, None, None))

    # determinism
    w2, t2 = one_median_5eps(ds, cfg)
    same_out = np.array_equal(w2.vertices, winner.vertices) and t2.winner_coreset_cost == trace.winner_coreset_cost
    checks.append(_check("median1", "seeded_determinism", same_out, None, None))
    return checks


def run_suites(names=None, fast: bool = True):
    """Run the requested suites; returns ``(all_passed, checks)``."""
    if not names:
        names = SUITES
    table = {
        "frechet": suite_frechet,
        "simplify": suite_simplify,
        "sensitivity": suite_sensitivity,
        "coreset": suite_coreset,
        "median1": suite_median1,
    }
    checks = []
    for name in names:
        if name not in table:
            raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
        checks.extend(table[name](fast=fast))
    return all(c["passed"] for c in checks), checks
