import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from grassmann_zh import matrix as M
from grassmann_zh.ring import factorize
from grassmann_zh.verify import random_subspace

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

MODULI = [2, 3, 4, 5, 6, 8, 9, 10, 12, 30, 36]
moduli = st.sampled_from(MODULI)


@st.composite
def matrices(draw, max_rows=3, max_cols=3, h=None):
    h = h if h is not None else draw(moduli)
    ctx = factorize(h)
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    rows = [[draw(st.integers(0, h - 1)) for _ in range(n)] for _ in range(m)]
    return M.ZhMatrix.from_rows(ctx, rows, n)


@st.composite
def subspaces(draw, n=None, m=None, h=None, max_n=4):
    h = h if h is not None else draw(moduli)
    n = n if n is not None else draw(st.integers(1, max_n))
    m = m if m is not None else draw(st.integers(0, n))
    seed = draw(st.integers(0, 2**32))
    return random_subspace(factorize(h), n, m, random.Random(seed))


@pytest.fixture
def z6():
    return factorize(6)


@pytest.fixture
def rng():
    return random.Random(1234)
