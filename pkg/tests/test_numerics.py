"""Normal CDFs and reproducible Gaussian streams."""

import math

import numpy as np
import pytest
from scipy import integrate
from scipy.stats import norm

from xccy_eps.numerics import (
    GaussianStream,
    bivariate_normal_cdf,
    gaussian_matrix,
    gaussian_samples,
    sgn,
    std_normal_cdf,
)


def bvn_cdf_quadrature(a, b, rho):
    """Adaptive 2-D quadrature of the bivariate normal density (oracle)."""
    def density(y, x):
        det = 1.0 - rho * rho
        q = (x * x - 2.0 * rho * x * y + y * y) / det
        return math.exp(-0.5 * q) / (2.0 * math.pi * math.sqrt(det))

    val, err = integrate.dblquad(density, -9.0, a, -9.0, b, epsabs=1e-13, epsrel=1e-12)
    assert err < 1e-11
    return val


# ---------------------------------------------------------------------------
# univariate CDF
# ---------------------------------------------------------------------------

def test_phi_center_and_limits():
    assert std_normal_cdf(0.0) == 0.5
    assert std_normal_cdf(math.inf) == 1.0
    assert std_normal_cdf(-math.inf) == 0.0


def test_phi_975_quantile():
    # quadrature of the density over (-inf, 1.959964]
    val, err = integrate.quad(norm.pdf, -10.0, 1.959964, epsabs=1e-13)
    assert err < 1e-11
    assert abs(val - 0.975000) < 1e-6
    assert abs(std_normal_cdf(1.959964) - val) < 1e-12


def test_phi_symmetry_grid():
    for x in np.linspace(-8.0, 8.0, 161):
        assert abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-14


def test_phi_monotone():
    grid = np.linspace(-12.0, 12.0, 2001)
    vals = std_normal_cdf(grid)
    assert np.all(np.diff(vals) >= 0.0)


def test_sgn_zero_is_positive():
    assert sgn(0.0) == 1.0
    assert sgn(-0.0) == 1.0
    assert sgn(3.5) == 1.0
    assert sgn(-2.0) == -1.0


# ---------------------------------------------------------------------------
# bivariate CDF
# ---------------------------------------------------------------------------

def test_bvn_trivial_values():
    assert abs(bivariate_normal_cdf(0.0, 0.0, 0.0) - 0.25) < 1e-14
    for a in (-1.0, 0.0, 1.0):
        for rho in (-0.6, 0.0, 0.7):
            assert abs(bivariate_normal_cdf(a, math.inf, rho) - std_normal_cdf(a)) < 1e-14
            assert abs(bivariate_normal_cdf(math.inf, a, rho) - std_normal_cdf(a)) < 1e-14
    assert bivariate_normal_cdf(-math.inf, 1.0, 0.3) == 0.0


def test_bvn_arcsine_identity():
    # closed form at the origin: 1/4 + arcsin(rho) / (2 pi)
    for rho in (-0.95, -0.5, 0.25, 0.5, 0.93):
        expected = 0.25 + math.asin(rho) / (2.0 * math.pi)
        assert abs(bivariate_normal_cdf(0.0, 0.0, rho) - expected) < 1e-12
    assert abs(bivariate_normal_cdf(0.0, 0.0, 0.5) - (0.25 + 1.0 / 12.0)) < 1e-8


@pytest.mark.parametrize("a,b,rho", [
    (0.3, -0.4, 0.5), (-1.2, 0.7, -0.35), (1.5, 1.1, 0.93),
    (-0.5, -0.8, -0.97), (2.0, -2.5, 0.2), (0.1, 0.2, 0.8),
])
def test_bvn_against_quadrature(a, b, rho):
    assert abs(bivariate_normal_cdf(a, b, rho) - bvn_cdf_quadrature(a, b, rho)) < 1e-10


def test_bvn_reflection_grid():
    grid = (-1.5, -0.3, 0.4, 1.2)
    rhos = (-0.9, -0.4, 0.0, 0.55, 0.95)
    for a in grid:
        for b in grid:
            for rho in rhos:
                lhs = bivariate_normal_cdf(a, b, rho) + bivariate_normal_cdf(-a, b, -rho)
                assert abs(lhs - std_normal_cdf(b)) < 1e-9
                # symmetry in the two abscissae
                assert abs(bivariate_normal_cdf(a, b, rho)
                           - bivariate_normal_cdf(b, a, rho)) < 1e-14


def test_bvn_independence_factorises():
    for a in (-2.0, -0.5, 0.0, 0.9, 2.5):
        for b in (-1.7, 0.3, 1.9):
            assert abs(bivariate_normal_cdf(a, b, 0.0)
                       - std_normal_cdf(a) * std_normal_cdf(b)) < 1e-10


def test_bvn_degenerate_correlations():
    for a in (-1.0, 0.2, 1.4):
        for b in (-0.6, 0.0, 2.0):
            assert abs(bivariate_normal_cdf(a, b, 1.0)
                       - std_normal_cdf(min(a, b))) < 1e-10
            expected = max(0.0, std_normal_cdf(a) + std_normal_cdf(b) - 1.0)
            assert abs(bivariate_normal_cdf(a, b, -1.0) - expected) < 1e-10


def test_bvn_rejects_bad_correlation():
    with pytest.raises(ValueError):
        bivariate_normal_cdf(0.0, 0.0, 1.0001)
    with pytest.raises(ValueError):
        bivariate_normal_cdf(0.0, 0.0, -2.0)


# ---------------------------------------------------------------------------
# Gaussian streams
# ---------------------------------------------------------------------------

def test_stream_determinism():
    a = gaussian_samples(GaussianStream(42, 0), 10)
    b = gaussian_samples(GaussianStream(42, 0), 10)
    assert np.array_equal(a, b)


def test_stream_empty_and_negative():
    assert gaussian_samples(GaussianStream(1, 0), 0).size == 0
    with pytest.raises(ValueError):
        gaussian_samples(GaussianStream(1, 0), -1)


def test_substreams_differ_and_are_uncorrelated():
    x = gaussian_samples(GaussianStream(7, 0), 50_000)
    y = gaussian_samples(GaussianStream(7, 1), 50_000)
    assert not np.array_equal(x[:100], y[:100])
    corr = np.corrcoef(x, y)[0, 1]
    assert abs(corr) < 0.02


def test_stream_law_of_large_numbers():
    n = 1_000_000
    z = gaussian_samples(GaussianStream(1, 0), n)
    assert abs(z.mean()) < 4.0 / math.sqrt(n)
    assert abs(z.var() - 1.0) < 0.01


def test_gaussian_matrix_row_major():
    flat = gaussian_samples(GaussianStream(9, 3), 12)
    mat = gaussian_matrix(GaussianStream(9, 3), 4, 3)
    assert np.array_equal(mat.reshape(-1), flat)


def test_stream_validates_seed_range():
    with pytest.raises(ValueError):
        GaussianStream(-1, 0)
    with pytest.raises(ValueError):
        GaussianStream(0, 2**64)
