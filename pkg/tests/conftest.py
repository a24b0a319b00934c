import numpy as np
import pytest

from fracheat.params import ProblemParams


@pytest.fixture
def s1_base() -> ProblemParams:
    """Reference instance with half-order kernels (region depends on sigma)."""
    return ProblemParams(n=1, p=1, q=1, alpha=0.5, beta=0.5, lam=2.0, sigma=0.4)


@pytest.fixture
def s1_blowup() -> ProblemParams:
    """The same family inside the blow-up region C."""
    return ProblemParams(n=1, p=1, q=1, alpha=0.5, beta=0.5, lam=2.0, sigma=1.4)


@pytest.fixture
def s2() -> ProblemParams:
    """Classical-order region-B instance with all constants in closed form."""
    return ProblemParams(n=1, p=1, q=1, alpha=1.0, beta=1.0, lam=0.5, sigma=0.5)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
