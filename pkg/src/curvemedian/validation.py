"""Input validation helpers for the estimator layer.

Curve collections arrive in the wild as datasets, lists of curves or lists
of raw ``(m_i, d)`` vertex arrays; these helpers coerce them all into a
validated :class:`CurveDataset` so the estimators compose with pipelines
that pass plain sequences around.
"""

from __future__ import annotations

import numbers

import numpy as np

from .curves import CurveDataset, PolygonalCurve, normalize
from .errors import InvalidInputError


def check_curves(X, *, dim: int | None = None) -> CurveDataset:
    """Coerce ``X`` into a :class:`CurveDataset`.

    Accepts an existing dataset, an iterable of :class:`PolygonalCurve`,
    or an iterable of array-likes of shape ``(m_i, d)`` (raw arrays are
    normalized).  ``dim`` optionally pins the expected dimension.
    """
    if isinstance(X, CurveDataset):
        ds = X
    else:
        items = list(X)
        if not items:
            raise InvalidInputError("X must contain at least one curve")
        curves = []
        for i, item in enumerate(items):
            if isinstance(item, PolygonalCurve):
                curves.append(item)
            else:
                try:
                    curves.append(normalize(np.asarray(item, dtype=np.float64)))
                except (TypeError, ValueError) as exc:
                    raise InvalidInputError(f"curve {i}: {exc}") from None
        ds = CurveDataset(curves)
    if dim is not None and ds.dim != dim:
        raise InvalidInputError(f"expected curves of dimension {dim}, got {ds.dim}")
    return ds


def check_random_state(random_state) -> int:
    """Normalize a seed argument to a plain non-negative int."""
    if random_state is None:
        return int(np.random.SeedSequence().entropy % (2**63))
    if isinstance(random_state, numbers.Integral):
        return int(random_state)
    raise InvalidInputError(
        f"random_state must be an int or None, got {type(random_state).__name__}"
    )


def check_positive_int(value, name: str) -> int:
    if not isinstance(value, numbers.Integral) or value < 1:
        raise InvalidInputError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
