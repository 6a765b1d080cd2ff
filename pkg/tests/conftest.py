import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


def _normalize(raw):
    v = np.asarray(raw, dtype=float)
    # products of subnormal masses underflow and change which outputs can
    # occur at all, so they are kept out of generated inputs
    v[v < 1e-200] = 0.0
    return v / v.sum()


@st.composite
def pmfs(draw, min_size=2, max_size=6, zeros=True):
    """Random pmfs, optionally with exact zeros."""
    n = draw(st.integers(min_size, max_size))
    lo = 0.0 if zeros else 1e-3
    raw = draw(st.lists(st.floats(lo, 1.0), min_size=n, max_size=n))
    if sum(raw) < 1e-3 or max(raw) < 1e-200:
        raw[draw(st.integers(0, n - 1))] = 1.0
    return _normalize(raw)


@st.composite
def channels(draw, nx, min_out=2, max_out=5, zeros=True):
    ny = draw(st.integers(min_out, max_out))
    return np.array([draw(pmfs(ny, ny, zeros)) for _ in range(nx)])


@st.composite
def priors_and_channels(draw, zeros=True):
    px = draw(pmfs(2, 5, zeros))
    return px, draw(channels(px.size, zeros=zeros))


finite_orders = st.one_of(
    st.floats(0.05, 0.95), st.floats(1.05, 30.0)
)
tagged_orders = st.sampled_from([0.0, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0, math.inf])
any_order = st.one_of(finite_orders, tagged_orders)
