import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvemedian.errors import CapacityError, InvalidInputError
from curvemedian.geometry import Ball, bbox_cell_count, grid_cover_ball, grid_point


def pts(arr):
    return {tuple(row) for row in np.asarray(arr).reshape(-1, arr.shape[-1])}


class TestGridPoint:
    def test_floor_arithmetic(self):
        assert tuple(grid_point((2.7, -1.3), 0.5)) == (2.5, -1.5)

    def test_identity_case(self):
        assert tuple(grid_point((0, 0, 0), 1.0)) == (0.0, 0.0, 0.0)

    def test_floor_of_negative(self):
        assert tuple(grid_point((-0.1,), 1.0)) == (-1.0,)

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidInputError):
            grid_point((np.nan, 0.0), 1.0)
        with pytest.raises(InvalidInputError):
            grid_point((0.0,), 0.0)

    def test_random_distance_and_idempotence(self, rng):
        for _ in range(10_000):
            d = int(rng.integers(1, 4))
            p = rng.normal(scale=10.0, size=d)
            r = float(rng.uniform(0.05, 3.0))
            g = grid_point(p, r)
            assert np.linalg.norm(p - g) <= np.sqrt(d) * r + 1e-9
            assert np.all(np.abs(p - g) < r + 1e-9)
            assert np.array_equal(grid_point(g, r), g)


class TestGridCoverBall:
    def test_unit_interval_cover(self):
        got = grid_cover_ball(Ball((0.0,), 1.0), 1.0)
        assert pts(got) == {(-1.0,), (0.0,), (1.0,)}

    def test_degenerate_ball_is_one_cell(self):
        got = grid_cover_ball(Ball((0.0, 0.0), 0.0), 0.5)
        assert pts(got) == {(0.0, 0.0)}

    def test_offcenter_interval(self):
        # frozen from the dense-sampling oracle below
        got = grid_cover_ball(Ball((0.25,), 0.5), 0.25)
        assert pts(got) == {(-0.25,), (0.0,), (0.25,), (0.5,), (0.75,)}

    def test_capacity_error_names_required_size(self):
        with pytest.raises(CapacityError) as ei:
            grid_cover_ball(Ball((0.0, 0.0), 100.0), 1e-3, cell_cap=100)
        assert ei.value.required is not None and ei.value.required > 100

    def test_size_bound(self, rng):
        for _ in range(50):
            d = int(rng.integers(1, 4))
            b = Ball(rng.normal(size=d), float(rng.uniform(0, 2.0)))
            r = float(rng.uniform(0.1, 1.0))
            got = grid_cover_ball(b, r)
            assert got.shape[0] <= (np.ceil(2 * b.radius / r) + 1) ** d
            assert got.shape[0] >= 1  # the center's own cell always hits

    def test_matches_dense_sampling_oracle(self, rng):
        # every grid point of a dense ball sample must be in the cover, and
        # every cover cell must genuinely intersect the ball
        for _ in range(30):
            d = int(rng.integers(1, 3))
            b = Ball(rng.normal(size=d), float(rng.uniform(0.2, 1.5)))
            r = float(rng.uniform(0.15, 0.8))
            cover = pts(grid_cover_ball(b, r))
            dirs = rng.normal(size=(4000, d))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            radii = b.radius * rng.random(4000) ** (1.0 / d)
            sample = b.center + dirs * radii[:, None]
            sampled_cells = {tuple(grid_point(q, r)) for q in sample}
            assert sampled_cells <= cover
            for corner in cover:
                lo = np.asarray(corner)
                nearest = np.clip(b.center, lo, lo + r)
                assert np.linalg.norm(nearest - b.center) <= b.radius + 1e-12

    def test_bbox_count_dominates(self):
        b = Ball((0.3, -0.2), 1.1)
        assert bbox_cell_count(b, 0.25) >= grid_cover_ball(b, 0.25).shape[0]


@given(
    st.integers(1, 3),
    st.floats(-50, 50, allow_nan=False),
    st.floats(0.01, 5.0, allow_nan=False),
)
@settings(max_examples=200, deadline=None)
def test_grid_point_within_cell(d, x, r):
    p = np.full(d, x)
    g = grid_point(p, r)
    assert np.all(g <= p + 1e-12)
    assert np.all(p - g < r * (1 + 1e-9) + 1e-12)
