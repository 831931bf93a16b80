"""Core data model: samples, frequency grids, weight kernels."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from speceq import (FrequencyGrid, FunctionalSample, InputDataError, center,
                    make_weight_kernel)

# Closed forms for the kernel constants (polynomial integration):
#   kappa2(epan) = 12*pi/5,   conv_sq(epan) = 2672*pi^3/385
#   kappa2(unif) = 2*pi,      conv_sq(unif) = 16*pi^3/3
EPAN_KAPPA2 = 12.0 * np.pi / 5.0
EPAN_CONV_SQ = 2672.0 * np.pi**3 / 385.0
UNIF_KAPPA2 = 2.0 * np.pi
UNIF_CONV_SQ = 16.0 * np.pi**3 / 3.0


class TestFunctionalSample:
    def test_basic_construction(self):
        s = FunctionalSample.from_values(np.ones((5, 3)))
        assert s.n_curves == 5 and s.n_points == 3
        assert_allclose(s.grid, [0.0, 0.5, 1.0])

    def test_grid_must_increase(self):
        with pytest.raises(InputDataError):
            FunctionalSample(values=np.ones((4, 2)), grid=[0.5, 0.5])

    def test_grid_must_lie_in_unit_interval(self):
        with pytest.raises(InputDataError):
            FunctionalSample(values=np.ones((4, 2)), grid=[0.0, 1.5])

    def test_rejects_nonfinite(self):
        values = np.ones((4, 2))
        values[1, 1] = np.nan
        with pytest.raises(InputDataError):
            FunctionalSample.from_values(values)

    def test_centered_flag_is_verified(self):
        with pytest.raises(InputDataError):
            FunctionalSample.from_values(np.ones((4, 2)), centered=True)

    def test_values_are_immutable(self):
        s = FunctionalSample.from_values(np.ones((4, 2)))
        with pytest.raises(ValueError):
            s.values[0, 0] = 2.0


class TestCenter:
    def test_constant_sample_becomes_zero(self):
        s = FunctionalSample.from_values(np.full((6, 3), 5.0))
        c = center(s)
        assert c.centered
        assert_allclose(c.values, 0.0, atol=1e-12)

    def test_idempotent(self):
        rng = np.random.default_rng(0)
        s = FunctionalSample.from_values(rng.standard_normal((8, 4)))
        once = center(s)
        twice = center(once)
        assert_allclose(twice.values, once.values, atol=1e-12)

    def test_two_point_mean(self):
        s = FunctionalSample(values=[[1.0], [3.0]], grid=[0.5])
        assert_allclose(center(s).values, [[-1.0], [1.0]])

    def test_linear(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal((7, 3))
        y = rng.standard_normal((7, 3))
        a, b = 2.5, -1.25
        combined = center(FunctionalSample.from_values(a * x + b * y))
        parts = (a * center(FunctionalSample.from_values(x)).values
                 + b * center(FunctionalSample.from_values(y)).values)
        assert_allclose(combined.values, parts, atol=1e-10)

    def test_original_unmodified(self):
        values = np.arange(8.0).reshape(4, 2)
        s = FunctionalSample.from_values(values)
        center(s)
        assert_allclose(s.values, values)


class TestFrequencyGrid:
    @pytest.mark.parametrize("T", [5, 6, 16, 17, 92, 100])
    def test_symmetry_and_range(self, T):
        g = FrequencyGrid(T=T)
        assert g.N == (T - 1) // 2
        assert g.frequencies.shape == (2 * g.N + 1,)
        assert_allclose(g.frequencies[::-1], -g.frequencies)  # lambda_{-t} = -lambda_t
        assert np.all(g.frequencies > -np.pi) and np.all(g.frequencies <= np.pi)

    def test_entry_accessor(self):
        g = FrequencyGrid(T=10)
        assert g.frequency(2) == pytest.approx(2 * np.pi * 2 / 10)
        with pytest.raises(IndexError):
            g.frequency(g.N + 1)


class TestWeightKernel:
    def test_unknown_name(self):
        with pytest.raises(InputDataError):
            make_weight_kernel("boxcar")

    @pytest.mark.parametrize("name", ["epanechnikov-pi", "uniform-pi"])
    def test_mass_is_two_pi(self, name):
        w = make_weight_kernel(name)
        x = np.linspace(-np.pi, np.pi, 200001)
        assert np.trapezoid(w.evaluate(x), x) == pytest.approx(2 * np.pi, abs=1e-8)

    @pytest.mark.parametrize("name", ["epanechnikov-pi", "uniform-pi"])
    def test_symmetric_nonnegative_compact(self, name):
        w = make_weight_kernel(name)
        x = np.linspace(-4.0, 4.0, 4001)
        wx = w.evaluate(x)
        assert_allclose(wx, w.evaluate(-x), atol=1e-14)
        assert np.all(wx >= 0.0)
        assert np.all(wx[np.abs(x) > np.pi] == 0.0)

    def test_epanechnikov_shape_and_constants(self):
        w = make_weight_kernel("epanechnikov-pi")
        x = np.array([0.0, np.pi / 2, np.pi])
        assert_allclose(w.evaluate(x), [1.5, 1.5 * 0.75, 0.0])
        assert w.kappa2 == pytest.approx(EPAN_KAPPA2, abs=1e-8)
        assert w.conv_sq_integral == pytest.approx(EPAN_CONV_SQ, rel=1e-7)

    def test_uniform_constants(self):
        w = make_weight_kernel("uniform-pi")
        assert w.kappa2 == pytest.approx(UNIF_KAPPA2, abs=1e-8)
        assert w.conv_sq_integral == pytest.approx(UNIF_CONV_SQ, rel=1e-7)
