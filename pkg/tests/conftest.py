import numpy as np
import pytest
from hypothesis import strategies as st

from umzi_qkd import InterferometerParams


@st.composite
def valid_params(draw):
    """Random valid (mu, nu): 0 < nu <= mu, mu - nu <= 1."""
    mu = draw(st.floats(min_value=1e-3, max_value=1.5, allow_nan=False))
    ratio = draw(st.floats(min_value=1e-6, max_value=1.0, allow_nan=False))
    nu = ratio * mu
    if mu - nu > 1.0:
        nu = mu - 1.0
    return InterferometerParams(mu, nu)


def random_valid_params(rng: np.random.Generator, n: int) -> list[InterferometerParams]:
    """Seeded batch of valid (mu, nu) pairs covering the whole domain."""
    mu = rng.uniform(1e-3, 1.5, size=n)
    nu = rng.uniform(0.0, 1.0, size=n) * mu
    nu = np.maximum(nu, mu - 1.0)
    return [InterferometerParams(float(m), float(v)) for m, v in zip(mu, nu)]


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260811)
