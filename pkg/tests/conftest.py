import numpy as np
import pytest

from pconf import GaussianSpec, KernelModel, LinearModel, PconfDataset


def central_difference(f, params, h=1e-6):
    """Independent finite-difference gradient oracle."""
    params = np.asarray(params, dtype=float)
    grad = np.zeros_like(params)
    for i in range(params.size):
        up = params.copy()
        dn = params.copy()
        up[i] += h
        dn[i] -= h
        grad[i] = (f(up) - f(dn)) / (2.0 * h)
    return grad


def relative_error(actual, expected):
    actual = np.asarray(actual, dtype=float)
    expected = np.asarray(expected, dtype=float)
    denom = max(float(np.linalg.norm(expected)), 1e-12)
    return float(np.linalg.norm(actual - expected)) / denom


def linear_from_params(params):
    return LinearModel(alpha=params[:-1], beta=float(params[-1]))


def kernel_from_params(params, prototypes, bandwidth=1.0):
    return KernelModel(
        prototypes=prototypes, coeffs=params[:-1], bias=float(params[-1]), bandwidth=bandwidth
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def overlap_spec():
    """The mu_neg = [2,2] Gaussian pair used throughout the synthetic protocol."""
    return GaussianSpec(mu_pos=[0.0, 0.0], mu_neg=[2.0, 2.0])


@pytest.fixture
def small_pconf_data(rng):
    features = rng.normal(size=(12, 2))
    confidence = rng.uniform(0.05, 1.0, size=12)
    return PconfDataset(features=features, confidence=confidence)
