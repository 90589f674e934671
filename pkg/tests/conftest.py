import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import logsob as L

settings.register_profile(
    "fast",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fast")


@pytest.fixture(scope="session")
def point_mass():
    return L.make_discrete([(0.0, 1.0)])


@pytest.fixture(scope="session")
def bernoulli():
    return L.make_discrete([(-1.0, 0.5), (1.0, 0.5)])


@pytest.fixture(scope="session")
def asymmetric():
    return L.make_discrete([(-1.0, 0.25), (1.0, 0.75)])


@pytest.fixture(scope="session")
def uniform():
    return L.make_uniform(-1.0, 1.0)


def dense_quantile_oracle(sm, u, lo, hi, tol=1e-9):
    """Plain bisection on the CDF; independent of the Newton quantile path."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if sm.cdf(mid) < u:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


def central_difference(fn, x, h):
    return (fn(x + h) - fn(x - h)) / (2.0 * h)
