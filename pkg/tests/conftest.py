import numpy as np
import pytest

from curvemedian.curves import CurveDataset, normalize


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


def random_curve(rng, d=None, m=None, scale=1.0, d_range=(1, 3), m_range=(2, 8)):
    if d is None:
        d = int(rng.integers(d_range[0], d_range[1] + 1))
    if m is None:
        m = int(rng.integers(m_range[0], m_range[1] + 1))
    return normalize(rng.normal(scale=scale, size=(m, d)))


def random_pair(rng, **kw):
    a = random_curve(rng, **kw)
    b = random_curve(rng, d=a.dim, **{k: v for k, v in kw.items() if k != "d"})
    return a, b


@pytest.fixture
def tiny_1d_dataset():
    return CurveDataset(
        [
            normalize([(0.0,), (1.0,)], id="a"),
            normalize([(0.2,), (1.3,)], id="b"),
            normalize([(0.1,), (0.8,), (0.4,), (1.1,)], id="c"),
            normalize([(5.0,), (6.0,)], id="d"),
        ]
    )
