import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from scipy.optimize import brentq

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

TAU_GRID = (0.05, 0.1, 0.2, 0.3)
S_GRID = (0.5, 1.0, 2.0)


def k0_oracle(tau):
    """Independent root of (1 + tau x^2) tanh x = x by a plain sign scan + brentq."""
    f = lambda x: (1 + tau * x * x) * np.tanh(x) - x  # noqa: E731
    xs = np.linspace(0.05, 50, 20000)
    v = f(xs)
    i = np.nonzero(np.sign(v[:-1]) != np.sign(v[1:]))[0][0]
    return brentq(f, xs[i], xs[i + 1], xtol=1e-15, rtol=1e-15)


@pytest.fixture(params=TAU_GRID)
def tau(request):
    return request.param


@pytest.fixture(params=S_GRID)
def s(request):
    return request.param
