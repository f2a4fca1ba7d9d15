"""Distributional checks of the gamma/beta/Dirichlet samplers."""

import math

import numpy as np
import pytest

from gammadex.errors import SizeError
from gammadex.gamma_forms import GammaParams
from gammadex.rng import RngStream
from gammadex.sampling import (
    beta_variate,
    beta_variates,
    dirichlet_variate,
    dirichlet_variates,
    gamma_variate,
    gamma_variates,
    standard_normals,
)

# Two-sided 0.001-level asymptotic Kolmogorov-Smirnov critical constant.
KS_CRIT_0001 = 1.9494746035204052


def _band(values, target, k=4.0):
    se = values.std(ddof=1) / math.sqrt(len(values))
    assert abs(values.mean() - target) < k * se, (values.mean(), target, se)


class TestGamma:
    def test_mean_and_variance(self):
        g = gamma_variates(RngStream(42, 0), GammaParams(2.0, 1.0), 10**6)
        _band(g, 2.0)
        sq = (g - 2.0) ** 2
        _band(sq, 2.0)

    def test_small_shape_mean_and_variance(self):
        g = gamma_variates(RngStream(42, 1), GammaParams(0.5, 2.0), 10**6)
        _band(g, 0.25)
        _band((g - 0.25) ** 2, 0.125)

    def test_exponential_ks(self):
        g = np.sort(gamma_variates(RngStream(7, 0), GammaParams(1.0, 1.0), 10**5))
        cdf = -np.expm1(-g)
        i = np.arange(1, len(g) + 1)
        ks = max(np.max(i / len(g) - cdf), np.max(cdf - (i - 1) / len(g)))
        assert ks < KS_CRIT_0001 / math.sqrt(len(g))

    @pytest.mark.parametrize("alpha", [0.1, 0.5, 1.0, 3.7])
    def test_strictly_positive(self, alpha):
        g = gamma_variates(RngStream(3, 2), GammaParams(alpha, 1.0), 50_000)
        assert np.all(g > 0.0)

    def test_reproducible(self):
        p = GammaParams(2.5, 0.5)
        a = gamma_variates(RngStream(9, 4), p, 10_000)
        b = gamma_variates(RngStream(9, 4), p, 10_000)
        assert np.array_equal(a, b)

    def test_additivity_moment_match(self):
        # gamma(a) + gamma(b) at a common rate must match gamma(a+b) moments.
        r = RngStream(15, 0)
        x = gamma_variates(r, GammaParams(1.3, 2.0), 400_000)
        y = gamma_variates(r, GammaParams(2.2, 2.0), 400_000)
        s = x + y
        _band(s, 3.5 / 2.0)
        _band((s - 3.5 / 2.0) ** 2, 3.5 / 4.0)

    def test_scalar_wrapper(self):
        v = gamma_variate(RngStream(1, 0), GammaParams(2.0))
        assert isinstance(v, float) and v > 0.0

    def test_rejects_negative_size(self):
        with pytest.raises(SizeError):
            gamma_variates(RngStream(1, 0), GammaParams(1.0), -1)


class TestNormals:
    def test_moments(self):
        z = standard_normals(RngStream(11, 0), 10**6)
        _band(z, 0.0)
        _band(z * z, 1.0)

    def test_odd_count(self):
        assert standard_normals(RngStream(11, 1), 7).shape == (7,)


class TestBeta:
    def test_mean(self):
        b = beta_variates(RngStream(21, 0), 2.0, 6.0, 10**6)
        _band(b, 0.25)
        assert np.all((b > 0.0) & (b < 1.0))

    def test_uniform_case(self):
        b = beta_variates(RngStream(22, 0), 1.0, 1.0, 10**6)
        _band(b, 0.5)

    def test_abs_2r_minus_1_uniform(self):
        # E|2R - 1| for uniform R is 1/2, matching the population Gini at shape 1.
        b = beta_variates(RngStream(23, 0), 1.0, 1.0, 10**6)
        _band(np.abs(2.0 * b - 1.0), 0.5)

    def test_scalar_wrapper(self):
        v = beta_variate(RngStream(2, 0), 0.5, 0.5)
        assert 0.0 < v < 1.0


class TestDirichlet:
    def test_rows_sum_to_one(self):
        z = dirichlet_variates(RngStream(31, 0), 1.0, 3, 100_000)
        assert np.abs(z.sum(axis=1) - 1.0).max() <= 1e-12
        assert np.all((z > 0.0) & (z < 1.0))

    def test_component_mean(self):
        z = dirichlet_variates(RngStream(32, 0), 1.0, 3, 10**6)
        _band(z[:, 0], 1.0 / 3.0)

    def test_product_moment(self):
        # E[sqrt(Z1 Z2)] = pi/8 for the flat Dirichlet on the 1-simplex.
        z = dirichlet_variates(RngStream(33, 0), 1.0, 2, 10**6)
        _band(np.sqrt(z[:, 0] * z[:, 1]), math.pi / 8.0)

    def test_single_draw(self):
        z = dirichlet_variate(RngStream(34, 0), 2.0, 5)
        assert z.shape == (5,)
        assert z.sum() == pytest.approx(1.0, abs=1e-12)

    def test_rejects_small_dimension(self):
        with pytest.raises(SizeError):
            dirichlet_variate(RngStream(1, 0), 1.0, 1)
