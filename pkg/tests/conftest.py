import numpy as np
import pytest
from hypothesis import strategies as st


def cgauss(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


@st.composite
def matrices(draw, min_dim=1, max_dim=6):
    n = draw(st.integers(min_dim, max_dim))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return cgauss(np.random.default_rng(seed), n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


from hypothesis import settings  # noqa: E402

settings.register_profile("repro", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repro")
