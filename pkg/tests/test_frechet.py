import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_curve, random_pair
from curvemedian.curves import PolygonalCurve, normalize
from curvemedian.errors import InvalidInputError
from curvemedian.frechet import (
    DistanceQueryOptions,
    _distance_bisection,
    discrete_frechet,
    frechet_decide,
    frechet_distance,
    pairwise_distances,
    point_curve_distance,
    segment_curve_distance,
    segment_curve_distance_batch,
)
from curvemedian.oracles import refinement_frechet

seg = lambda a, b: normalize([a, b])  # noqa: E731


class TestDecide:
    def test_identical_curves_zero(self):
        c = normalize([(0, 0), (1, 2), (3, 1)])
        assert frechet_decide(c, c, 0.0)

    def test_parallel_segments(self):
        s = seg((0, 0), (1, 0))
        t = seg((0, 1), (1, 1))
        assert not frechet_decide(s, t, 0.999)
        assert frechet_decide(s, t, 1.0)

    def test_backtracking_1d(self):
        # continuous distance is half the maximal drop, not the discrete 0.5
        s = seg((0.0,), (1.0,))
        t = normalize([(0.0,), (0.5,), (0.0,), (1.0,)])
        assert not frechet_decide(s, t, 0.249)
        assert frechet_decide(s, t, 0.25)

    def test_monotone_in_eps(self, rng):
        for _ in range(300):
            a, b = random_pair(rng)
            v = frechet_distance(a, b)
            was_true = False
            for e in (0.25 * v, 0.9 * v, v, 1.1 * v, 2 * v + 1e-12):
                cur = frechet_decide(a, b, e)
                if was_true:
                    assert cur  # once true, stays true as eps grows
                was_true = was_true or cur

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            frechet_decide(seg((0,), (1,)), seg((0, 0), (1, 1)), 1.0)

    def test_negative_eps_rejected(self):
        with pytest.raises(InvalidInputError):
            frechet_decide(seg((0,), (1,)), seg((0,), (1,)), -1.0)


class TestDistance:
    def test_identical_exact_zero(self):
        c = normalize([(0, 0), (1, 2), (3, 1), (4, 4)])
        assert frechet_distance(c, c) == 0.0

    def test_point_pair(self):
        assert frechet_distance(normalize([(3.0, 4.0)]), normalize([(0.0, 0.0)])) == 5.0

    def test_parallel_offset_segments(self):
        assert frechet_distance(seg((0, 0), (1, 0)), seg((0, 1), (1, 1))) == 1.0

    def test_point_vs_curve_is_max_vertex_distance(self):
        t = normalize([(0.0,), (2.0,), (1.0,)])
        assert frechet_distance(normalize([(0.0,)]), t) == 2.0
        assert point_curve_distance(np.array([0.0]), t) == 2.0

    def test_sandwich_and_symmetry(self, rng):
        for _ in range(500):
            a, b = random_pair(rng)
            v = frechet_distance(a, b)
            assert v == frechet_distance(b, a)  # bit-exact symmetry
            L = max(
                np.linalg.norm(a.vertices[0] - b.vertices[0]),
                np.linalg.norm(a.vertices[-1] - b.vertices[-1]),
            )
            U = discrete_frechet(a, b)
            assert L - 1e-12 <= v <= U + 1e-12

    def test_triangle_inequality(self, rng):
        opts = DistanceQueryOptions(rel_tol=1e-10)
        for _ in range(100):
            a = random_curve(rng, d=2)
            b = random_curve(rng, d=2)
            c = random_curve(rng, d=2)
            ab = frechet_distance(a, b, opts)
            bc = frechet_distance(b, c, opts)
            ac = frechet_distance(a, c, opts)
            tol = 3 * 1e-10 * max(ab, bc, ac, 1.0)
            assert ac <= ab + bc + tol

    def test_reparameterization_invariance(self, rng):
        opts = DistanceQueryOptions(rel_tol=1e-9, abs_tol=1e-12)
        for _ in range(100):
            a, b = random_pair(rng, m_range=(3, 6))
            i = int(rng.integers(0, len(a) - 1))
            t = float(rng.uniform(0.2, 0.8))
            mid = a.vertices[i] * (1 - t) + a.vertices[i + 1] * t
            a2 = PolygonalCurve(np.insert(a.vertices, i + 1, mid, axis=0))
            v1 = frechet_distance(a, b, opts)
            v2 = frechet_distance(a2, b, opts)
            assert abs(v1 - v2) <= 2e-9 * max(1.0, v1)

    def test_agrees_with_refinement_oracle(self, rng):
        for _ in range(25):
            a, b = random_pair(rng, m_range=(2, 5))
            v = frechet_distance(a, b)
            vr = refinement_frechet(a, b, pieces=250)
            # oracle converges from above at rate O(1/pieces)
            assert v <= vr + 1e-9
            assert vr - v <= 0.05 * max(vr, 0.1)

    def test_bracket_validity(self, rng):
        for _ in range(300):
            a, b = random_pair(rng)
            U = discrete_frechet(a, b)
            assert frechet_decide(a, b, U)
            L = max(
                np.linalg.norm(a.vertices[0] - b.vertices[0]),
                np.linalg.norm(a.vertices[-1] - b.vertices[-1]),
            )
            if L > 0:
                assert not frechet_decide(a, b, (1 - 1e-8) * L)


class TestSegmentClosedForm:
    def test_matches_bisection(self, rng):
        opts = DistanceQueryOptions(rel_tol=1e-12)
        worst = 0.0
        for _ in range(800):
            d = int(rng.integers(1, 4))
            p = rng.normal(size=d)
            q = rng.normal(size=d)
            tau = random_curve(rng, d=d, m_range=(1, 7))
            v = segment_curve_distance(p, q, tau)
            s = normalize([p, q])
            if len(s) != 2:
                continue
            vb = _distance_bisection(s, tau, opts)  # general path, no closed forms
            worst = max(worst, abs(v - vb) / max(vb, 1e-15))
        assert worst <= 1e-9

    def test_point_degenerate(self):
        tau = normalize([(0.0, 0.0), (1.0, 1.0), (0.0, 2.0)])
        p = np.array([0.0, 0.0])
        assert segment_curve_distance(p, p, tau) == point_curve_distance(p, tau)

    def test_batch_matches_scalar(self, rng):
        tau = random_curve(rng, d=2, m_range=(3, 6))
        A = rng.normal(size=(64, 2))
        B = rng.normal(size=(64, 2))
        batch = segment_curve_distance_batch(A, B, tau)
        for i in range(64):
            assert batch[i] == segment_curve_distance(A[i], B[i], tau)


class TestDiscreteFrechet:
    def test_identical(self):
        c = normalize([(0, 0), (1, 1)])
        assert discrete_frechet(c, c) == 0.0

    def test_point_pair(self):
        assert discrete_frechet(normalize([(0.0,)]), normalize([(2.5,)])) == 2.5

    def test_known_value(self):
        # best coupling pairs the middle vertex with an endpoint
        a = normalize([(0.0,), (1.0,)])
        b = normalize([(0.0,), (0.5,), (0.0,), (1.0,)])
        assert discrete_frechet(a, b) == 0.5


class TestOptions:
    def test_validation(self):
        with pytest.raises(InvalidInputError):
            DistanceQueryOptions(rel_tol=0.0)
        with pytest.raises(InvalidInputError):
            DistanceQueryOptions(abs_tol=-1.0)

    def test_tolerance_honored(self, rng):
        opts = DistanceQueryOptions(rel_tol=1e-6)
        for _ in range(50):
            a, b = random_pair(rng, m_range=(3, 6))
            v6 = frechet_distance(a, b, opts)
            v12 = frechet_distance(a, b, DistanceQueryOptions(rel_tol=1e-12))
            assert abs(v6 - v12) <= 1e-6 * max(v6, v12) + 1e-15


class TestPairwise:
    def test_thread_count_invariance(self, rng):
        rows = [random_curve(rng, d=2) for _ in range(6)]
        cols = [random_curve(rng, d=2) for _ in range(5)]
        D1 = pairwise_distances(rows, cols, threads=1)
        D4 = pairwise_distances(rows, cols, threads=4)
        assert np.array_equal(D1, D4)


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_symmetry_property(data):
    d = data.draw(st.integers(1, 3))
    m1 = data.draw(st.integers(1, 5))
    m2 = data.draw(st.integers(1, 5))
    fl = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
    va = data.draw(st.lists(st.tuples(*[fl] * d), min_size=m1, max_size=m1))
    vb = data.draw(st.lists(st.tuples(*[fl] * d), min_size=m2, max_size=m2))
    a = normalize(va)
    b = normalize(vb)
    v = frechet_distance(a, b)
    assert v == frechet_distance(b, a)
    assert v >= 0.0
    assert math.isfinite(v)
