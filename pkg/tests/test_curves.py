import io
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvemedian.curves import (
    CurveDataset,
    PolygonalCurve,
    WeightedCurveSet,
    load_dataset,
    load_weighted_set,
    normalize,
    save_dataset,
    save_weighted_set,
)
from curvemedian.errors import InvalidInputError, ParseError
from curvemedian.frechet import frechet_distance


class TestNormalize:
    def test_removes_exactly_collinear_middle(self):
        c = normalize([(0, 0), (1, 0), (2, 0), (2, 1)], collinearity_tol=1e-12)
        assert c.vertices.tolist() == [[0, 0], [2, 0], [2, 1]]

    def test_removes_duplicates(self):
        c = normalize([(0, 0), (0, 0), (1, 1)])
        assert c.vertices.tolist() == [[0, 0], [1, 1]]

    def test_near_collinear_within_tolerance(self):
        # perpendicular offset 1e-15 is below 1e-12 * segment length
        c = normalize([(0, 0), (1, 1e-15), (2, 0)], collinearity_tol=1e-12)
        assert c.vertices.tolist() == [[0, 0], [2, 0]]

    def test_keeps_real_turns(self):
        c = normalize([(0, 0), (1, 0.5), (2, 0)])
        assert len(c) == 3

    def test_keeps_spikes(self):
        c = normalize([(0.0,), (1.0,), (0.0,)])
        assert len(c) == 3

    def test_monotone_1d_collapses(self):
        c = normalize([(0.0,), (0.4,), (1.0,)])
        assert c.vertices.tolist() == [[0.0], [1.0]]

    def test_single_vertex_allowed(self):
        assert len(normalize([(3.0, 4.0)])) == 1

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            normalize(np.empty((0, 2)))

    def test_collapse_to_point(self):
        c = normalize([(1.0, 1.0), (1.0, 1.0), (1.0, 1.0)])
        assert len(c) == 1

    def test_never_increases_complexity(self, rng):
        for _ in range(200):
            m = int(rng.integers(1, 10))
            d = int(rng.integers(1, 4))
            raw = rng.normal(size=(m, d))
            assert len(normalize(raw)) <= m

    def test_zero_tol_keeps_frechet_distance(self, rng):
        for _ in range(50):
            d = int(rng.integers(1, 3))
            raw = rng.normal(size=(int(rng.integers(3, 7)), d))
            other = normalize(rng.normal(size=(int(rng.integers(2, 6)), d)))
            a = normalize(raw, collinearity_tol=0.0)
            b = PolygonalCurve(raw)
            assert abs(frechet_distance(a, other) - frechet_distance(b, other)) <= 1e-9


@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=12))
@settings(max_examples=200, deadline=None)
def test_normalize_idempotent(points):
    c = normalize(points)
    again = normalize(c.vertices)
    assert np.array_equal(c.vertices, again.vertices)


class TestPolygonalCurve:
    def test_immutable(self):
        c = normalize([(0, 0), (1, 1)])
        with pytest.raises(AttributeError):
            c.id = "x"
        with pytest.raises(ValueError):
            c.vertices[0, 0] = 5.0

    def test_rejects_nonfinite(self):
        with pytest.raises(InvalidInputError):
            PolygonalCurve([(np.inf, 0.0)])

    def test_one_dim_coercion(self):
        c = PolygonalCurve([0.0, 1.0, 2.0])
        assert c.dim == 1 and len(c) == 3


class TestDataset:
    def test_uniform_dimension_enforced(self):
        with pytest.raises(InvalidInputError):
            CurveDataset([normalize([(0, 0)]), normalize([(0.0,)])])

    def test_max_complexity(self):
        ds = CurveDataset([normalize([(0, 0), (1, 1)]), normalize([(0, 0), (1, 0), (1, 1)])])
        assert ds.max_complexity == 3 and ds.dim == 2 and len(ds) == 2


class TestCsv:
    def test_two_curves(self):
        src = "id,x1,x2\na,0,0\na,1,0\nb,5,5\nb,6,6\n"
        ds = load_dataset(src.encode(), format="csv")
        assert len(ds) == 2
        assert [c.id for c in ds] == ["a", "b"]
        assert all(len(c) == 2 for c in ds)

    def test_ragged_dimensions_error_with_line(self):
        src = "id,x1,x2\na,0,0\na,1,0,3\n"
        with pytest.raises(ParseError) as ei:
            load_dataset(src.encode(), format="csv")
        assert ei.value.line == 3

    def test_non_numeric_field(self):
        src = "id,x1\na,0\na,zebra\n"
        with pytest.raises(ParseError) as ei:
            load_dataset(src.encode(), format="csv")
        assert ei.value.line == 3

    def test_roundtrip(self, rng):
        ds = CurveDataset(
            [normalize(rng.normal(size=(int(rng.integers(2, 5)), 2)), id=f"c{i}") for i in range(4)]
        )
        buf = io.StringIO()
        save_dataset(ds, buf, format="csv")
        back = load_dataset(buf.getvalue().encode(), format="csv")
        for a, b in zip(ds, back):
            assert a.id == b.id
            assert np.array_equal(a.vertices, b.vertices)


class TestJsonl:
    def test_single_record(self):
        src = '{"id":"x","vertices":[[0],[1]]}\n'
        ds = load_dataset(src.encode(), format="jsonl")
        assert len(ds) == 1 and ds.dim == 1 and ds[0].id == "x"

    def test_bad_json_line_number(self):
        src = '{"id":"x","vertices":[[0],[1]]}\n{oops\n'
        with pytest.raises(ParseError) as ei:
            load_dataset(src.encode(), format="jsonl")
        assert ei.value.line == 2

    def test_ragged_vertices(self):
        src = '{"id":"x","vertices":[[0],[1,2]]}\n'
        with pytest.raises(ParseError):
            load_dataset(src.encode(), format="jsonl")

    def test_empty_curve(self):
        with pytest.raises(ParseError):
            load_dataset(b'{"id":"x","vertices":[]}\n', format="jsonl")


class TestWeightedSet:
    def make(self, rng, n=5):
        curves = [normalize(rng.normal(size=(3, 2)), id=f"c{i % 3}") for i in range(n)]
        weights = rng.random(n) + 0.5
        return WeightedCurveSet(curves, weights, epsilon=0.1, metadata={"seed": 1})

    def test_roundtrip_exact(self, rng):
        ws = self.make(rng)
        buf = io.StringIO()
        save_weighted_set(ws, buf)
        back = load_weighted_set(buf.getvalue().encode())
        assert len(back) == len(ws)
        for a, b, wa, wb in zip(ws.curves, back.curves, ws.weights, back.weights):
            assert np.array_equal(a.vertices, b.vertices)
            assert a.id == b.id
            assert wa == wb  # full-precision round trip

    def test_zero_weight_refused(self, rng):
        curves = [normalize(rng.normal(size=(2, 1)))]
        with pytest.raises(InvalidInputError):
            WeightedCurveSet(curves, [0.0])
        with pytest.raises(ParseError):
            load_weighted_set(b'{"id":"a","vertices":[[0],[1]],"weight":0}\n')

    def test_multiset_entries_preserved(self):
        c = normalize([(0.0,), (1.0,)], id="dup")
        ws = WeightedCurveSet([c, c], [1.0, 2.0])
        buf = io.StringIO()
        save_weighted_set(ws, buf)
        lines = [ln for ln in buf.getvalue().splitlines() if ln.strip()]
        assert len(lines) == 2
        recs = [json.loads(ln) for ln in lines]
        assert recs[0]["vertices"] == recs[1]["vertices"]

    def test_grouped_sums_weights(self):
        c = normalize([(0.0,), (1.0,)])
        d = normalize([(2.0,), (3.0,)])
        ws = WeightedCurveSet([c, d, c], [1.0, 2.0, 0.5])
        reps, sums = ws.grouped()
        assert len(reps) == 2
        assert sums.tolist() == [1.5, 2.0]
