"""Polygonal-curve data model, normalization and dataset I/O.

A polygonal curve is an ordered vertex sequence in ``R^d``; its complexity
is the number of vertices.  Vertices are stored as a read-only
``(m, d)`` float64 array.  Explicit parameterization instants are not
stored: every operation in this library is invariant under
reparameterization, so instants are implicitly uniform on edges.

Normalization enforces the model invariants: consecutive vertices are
distinct and no three consecutive vertices are collinear (within a relative
tolerance).  A single vertex is the degenerate constant curve and is
allowed.

File formats:

* CSV with header ``id,x1,...,xd``; rows grouped by id, vertex order =
  row order, UTF-8, decimal point only.
* JSONL with one object per curve:
  ``{"id": str, "vertices": [[f, ...], ...], "weight": optional f}``.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidInputError, ParseError

#: Default relative tolerance for collinearity removal.  The curve model
#: forbids exact collinearity; floating point needs a tolerance.
COLLINEARITY_TOL = 1e-12


class PolygonalCurve:
    """Immutable polygonal curve given by its vertices.

    Parameters
    ----------
    vertices : array-like of shape (m, d)
        Ordered vertex sequence, ``m >= 1``.
    id : str, optional
        Stable identifier used by dataset I/O.

    Construction validates shape and finiteness only; use
    :func:`normalize` to enforce the no-duplicate / no-collinear-triple
    invariants on raw input.
    """

    __slots__ = ("vertices", "id")

    def __init__(self, vertices, id: str | None = None):
        arr = np.asarray(vertices, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidInputError(
                f"curve vertices must form a non-empty (m, d) array, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("curve has non-finite vertex coordinates")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "vertices", arr)
        object.__setattr__(self, "id", id)

    def __setattr__(self, name, value):
        raise AttributeError("PolygonalCurve is immutable")

    def __len__(self) -> int:
        """Complexity: the number of vertices."""
        return self.vertices.shape[0]

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def start(self) -> np.ndarray:
        return self.vertices[0]

    @property
    def end(self) -> np.ndarray:
        return self.vertices[-1]

    def key(self) -> bytes:
        """Hashable identity of the vertex sequence (ignores ``id``)."""
        return self.vertices.tobytes()

    def __eq__(self, other):
        if not isinstance(other, PolygonalCurve):
            return NotImplemented
        return (
            self.vertices.shape == other.vertices.shape
            and np.array_equal(self.vertices, other.vertices)
            and self.id == other.id
        )

    def __hash__(self):
        return hash((self.vertices.shape, self.key()))

    def __repr__(self):
        tag = f" id={self.id!r}" if self.id is not None else ""
        return f"<PolygonalCurve m={len(self)} d={self.dim}{tag}>"


def _point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = float((p - a) @ ab) / denom
    t = min(1.0, max(0.0, t))
    return float(np.linalg.norm(a + t * ab - p))


def normalize(
    raw_vertices,
    collinearity_tol: float = COLLINEARITY_TOL,
    id: str | None = None,
) -> PolygonalCurve:
    """Build a :class:`PolygonalCurve` enforcing the model invariants.

    Removes exact consecutive duplicates and every middle vertex whose
    distance to the segment through its neighbors is at most
    ``collinearity_tol`` times that segment's length.  Idempotent; never
    increases complexity.
    """
    if collinearity_tol < 0:
        raise InvalidInputError("collinearity_tol must be >= 0")
    arr = PolygonalCurve(raw_vertices).vertices
    out: list[np.ndarray] = []
    for v in arr:
        if out and np.array_equal(out[-1], v):
            continue
        while len(out) >= 2:
            a, b = out[-2], out[-1]
            if _point_segment_distance(b, a, v) <= collinearity_tol * float(np.linalg.norm(v - a)):
                out.pop()
            else:
                break
        out.append(v)
    return PolygonalCurve(np.array(out), id=id)


@dataclass(frozen=True)
class CurveDataset:
    """Non-empty list of curves of uniform dimension."""

    curves: tuple[PolygonalCurve, ...]

    def __init__(self, curves: Iterable[PolygonalCurve]):
        curves = tuple(curves)
        if not curves:
            raise InvalidInputError("a dataset must contain at least one curve")
        d = curves[0].dim
        for i, c in enumerate(curves):
            if c.dim != d:
                raise InvalidInputError(
                    f"curve {i} has dimension {c.dim}, expected uniform dimension {d}"
                )
        object.__setattr__(self, "curves", curves)

    @property
    def dim(self) -> int:
        return self.curves[0].dim

    @property
    def max_complexity(self) -> int:
        return max(len(c) for c in self.curves)

    def __len__(self) -> int:
        return len(self.curves)

    def __iter__(self) -> Iterator[PolygonalCurve]:
        return iter(self.curves)

    def __getitem__(self, i) -> PolygonalCurve:
        return self.curves[i]


@dataclass(frozen=True)
class WeightedCurveSet:
    """Multiset of curves with strictly positive weights.

    Houses coreset samples; entries may repeat and each entry contributes
    its own weight.  ``metadata`` carries provenance (seed, sample size,
    target accuracy, sensitivity summary) and is not interpreted here.
    """

    curves: tuple[PolygonalCurve, ...]
    weights: np.ndarray
    epsilon: float | None = None
    metadata: dict = field(default_factory=dict)
    profile: object | None = None  # SensitivityProfile when built by the sampler

    def __init__(self, curves, weights, epsilon=None, metadata=None, profile=None):
        curves = tuple(curves)
        w = np.asarray(weights, dtype=np.float64).reshape(-1)
        if len(curves) != w.shape[0]:
            raise InvalidInputError(
                f"{len(curves)} curves but {w.shape[0]} weights"
            )
        if len(curves) == 0:
            raise InvalidInputError("a weighted curve set must be non-empty")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise InvalidInputError("weights must be finite and strictly positive")
        d = curves[0].dim
        for c in curves:
            if c.dim != d:
                raise InvalidInputError("weighted set mixes curve dimensions")
        w = w.copy()
        w.setflags(write=False)
        object.__setattr__(self, "curves", curves)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "epsilon", epsilon)
        object.__setattr__(self, "metadata", dict(metadata or {}))
        object.__setattr__(self, "profile", profile)

    @property
    def dim(self) -> int:
        return self.curves[0].dim

    def __len__(self) -> int:
        return len(self.curves)

    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def grouped(self) -> tuple[list[PolygonalCurve], np.ndarray]:
        """Distinct curves (by vertex sequence, first-occurrence order) with
        summed weights.  Weighted costs over the multiset are unchanged by
        this grouping."""
        order: dict[bytes, int] = {}
        reps: list[PolygonalCurve] = []
        sums: list[float] = []
        for c, w in zip(self.curves, self.weights):
            k = c.key()
            if k in order:
                sums[order[k]] += float(w)
            else:
                order[k] = len(reps)
                reps.append(c)
                sums.append(float(w))
        return reps, np.asarray(sums)


# ---------------------------------------------------------------------------
# dataset I/O


def _open_text(source, mode="r"):
    if isinstance(source, (str, Path)):
        return open(source, mode, encoding="utf-8"), True
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8")), True
    if isinstance(source, io.BytesIO) or (hasattr(source, "read") and "b" in getattr(source, "mode", "")):
        return io.TextIOWrapper(source, encoding="utf-8"), False
    return source, False


def _parse_csv(stream) -> list[PolygonalCurve]:
    header = stream.readline()
    if not header:
        raise ParseError("empty file", line=1)
    cols = [c.strip() for c in header.rstrip("\n").split(",")]
    if len(cols) < 2 or cols[0] != "id":
        raise ParseError(f"expected header 'id,x1,...,xd', got {header.strip()!r}", line=1)
    d = len(cols) - 1
    groups: dict[str, list[list[float]]] = {}
    order: list[str] = []
    for lineno, line in enumerate(stream, start=2):
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != d + 1:
            raise ParseError(
                f"row has {len(parts) - 1} coordinates, expected {d}", line=lineno
            )
        cid = parts[0]
        try:
            coords = [float(x) for x in parts[1:]]
        except ValueError as exc:
            raise ParseError(f"non-numeric coordinate ({exc})", line=lineno) from None
        if cid not in groups:
            groups[cid] = []
            order.append(cid)
        groups[cid].append(coords)
    if not order:
        raise ParseError("file contains a header but no rows", line=2)
    return [normalize(groups[cid], id=cid) for cid in order]


def _parse_jsonl(stream, with_weights=False):
    curves: list[PolygonalCurve] = []
    weights: list[float] = []
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", line=lineno) from None
        if not isinstance(rec, dict) or "vertices" not in rec:
            raise ParseError("record must be an object with a 'vertices' field", line=lineno)
        verts = rec["vertices"]
        if not isinstance(verts, list) or not verts:
            raise ParseError("'vertices' must be a non-empty list", line=lineno)
        lens = {len(v) if isinstance(v, list) else -1 for v in verts}
        if len(lens) != 1 or -1 in lens:
            raise ParseError("ragged vertex dimensions within a curve", line=lineno)
        try:
            curve = normalize(np.asarray(verts, dtype=np.float64), id=rec.get("id"))
        except (InvalidInputError, ValueError) as exc:
            raise ParseError(str(exc), line=lineno) from None
        curves.append(curve)
        if with_weights:
            w = rec.get("weight", 1.0)
            if not isinstance(w, (int, float)) or w <= 0:
                raise ParseError(f"weight must be a positive number, got {w!r}", line=lineno)
            weights.append(float(w))
    if not curves:
        raise ParseError("file contains no curves", line=1)
    if with_weights:
        return curves, weights
    return curves


def load_dataset(source, format: str = "csv") -> CurveDataset:
    """Load a :class:`CurveDataset` from a path, bytes or text stream.

    One curve per distinct id, vertices in file order, normalized.  Parse
    problems raise :class:`ParseError` with the offending line number.
    """
    stream, close = _open_text(source)
    try:
        if format == "csv":
            curves = _parse_csv(stream)
        elif format == "jsonl":
            curves = _parse_jsonl(stream)
        else:
            raise InvalidInputError(f"unknown format {format!r} (expected 'csv' or 'jsonl')")
        try:
            return CurveDataset(curves)
        except InvalidInputError as exc:
            raise ParseError(str(exc)) from None
    finally:
        if close:
            stream.close()


def save_dataset(dataset: CurveDataset, sink, format: str = "csv") -> None:
    """Write a dataset; inverse of :func:`load_dataset` up to normalization."""
    stream, close = _open_text(sink, mode="w")
    try:
        if format == "csv":
            d = dataset.dim
            stream.write("id," + ",".join(f"x{j + 1}" for j in range(d)) + "\n")
            for i, c in enumerate(dataset):
                cid = c.id if c.id is not None else str(i)
                for v in c.vertices:
                    stream.write(cid + "," + ",".join(repr(float(x)) for x in v) + "\n")
        elif format == "jsonl":
            for i, c in enumerate(dataset):
                rec = {
                    "id": c.id if c.id is not None else str(i),
                    "vertices": [[float(x) for x in v] for v in c.vertices],
                }
                stream.write(json.dumps(rec, sort_keys=True) + "\n")
        else:
            raise InvalidInputError(f"unknown format {format!r}")
    finally:
        if close:
            stream.close()


def save_weighted_set(ws: WeightedCurveSet, sink) -> None:
    """Serialize a weighted set as JSONL; weights at full precision.

    Round-trips through :func:`load_weighted_set` exactly; multiset entries
    are preserved as separate records.
    """
    stream, close = _open_text(sink, mode="w")
    try:
        for i, (c, w) in enumerate(zip(ws.curves, ws.weights)):
            if w <= 0:
                raise InvalidInputError("weights must be strictly positive")
            rec = {
                "id": c.id if c.id is not None else str(i),
                "vertices": [[float(x) for x in v] for v in c.vertices],
                "weight": float(w),
            }
            stream.write(json.dumps(rec, sort_keys=True) + "\n")
    finally:
        if close:
            stream.close()


def load_weighted_set(source, epsilon=None, metadata=None) -> WeightedCurveSet:
    """Load a weighted set saved by :func:`save_weighted_set`."""
    stream, close = _open_text(source)
    try:
        curves, weights = _parse_jsonl(stream, with_weights=True)
    finally:
        if close:
            stream.close()
    return WeightedCurveSet(curves, weights, epsilon=epsilon, metadata=metadata)
