"""Unit tests for the quadrature rules."""

import numpy as np
import pytest
from scipy.special import beta, erfi

from conformable_bvp.errors import ParameterError, QuadratureError
from conformable_bvp.kernel import KernelParams, eval_K_array
from conformable_bvp.quadrature import (
    QuadratureConfig,
    aitken,
    apply_kernel,
    composite_rule,
    graded_edges,
    graded_sum,
    integrate,
    integrate_jacobi,
    jacobi_rule,
    legendre_rule,
)


def ones(s):
    return np.ones_like(s)


class TestRules:
    """Test cases for the Gauss rules."""

    def test_legendre_exactness(self):
        u, w = legendre_rule(8)
        assert w.sum() == pytest.approx(1.0, abs=1e-14)
        for degree in range(16):
            assert np.dot(w, u**degree) == pytest.approx(1.0 / (degree + 1), abs=1e-13)

    @pytest.mark.parametrize("a,b", [(0.0, 0.0), (1.0, 0.5), (1.0, -0.5), (0.0, -0.9)])
    def test_jacobi_weights(self, a, b):
        u, w = jacobi_rule(12, a, b)
        assert np.all((u > 0.0) & (u < 1.0))
        assert w.sum() == pytest.approx(beta(a + 1.0, b + 1.0), rel=1e-12)

    def test_graded_edges(self):
        edges = graded_edges(0.0, 1.0, 4, 3.0)
        assert edges.tolist() == pytest.approx([0.0, 1 / 64, 8 / 64, 27 / 64, 1.0])

    def test_composite_rule_shapes(self):
        points, weights = composite_rule(np.array([0.0, 0.5, 1.0]), 8)
        assert points.shape == weights.shape == (2, 8)
        assert weights.sum() == pytest.approx(1.0, abs=1e-14)


class TestIntegrate:
    """Test cases for integrate."""

    def test_constant(self):
        assert integrate(ones, 0.0, 1.0) == pytest.approx(1.0, abs=1e-13)

    def test_polynomial_on_one_panel(self):
        cfg = QuadratureConfig()
        assert graded_sum(lambda s: s**15, 0.0, 1.0, 1, cfg) == pytest.approx(1.0 / 16.0, abs=1e-13)

    def test_square_root_weight(self):
        value = integrate(lambda s: (1.0 - s) * np.sqrt(s), 0.0, 1.0)
        assert value == pytest.approx(4.0 / 15.0, abs=1e-9)

    def test_inverse_square_root_weight(self):
        value = integrate(lambda s: (1.0 - s) / np.sqrt(s), 0.0, 1.0)
        assert value == pytest.approx(4.0 / 3.0, abs=1e-9)

    def test_inverse_square_root_on_subinterval(self):
        value = integrate(lambda s: 1.0 / np.sqrt(s - 0.2), 0.2, 0.6)
        assert value == pytest.approx(2.0 * np.sqrt(0.4), abs=1e-9)

    def test_aitken(self):
        assert aitken(1.0, 0.5, 0.25) == pytest.approx(0.0, abs=1e-15)
        assert aitken(1.0, 2.0, 4.0) is None
        assert aitken(1.0, 1.0, 1.0) is None

    def test_grading_beats_uniform_mesh(self):
        g = lambda s: (1.0 - s) / np.sqrt(s)  # noqa: E731
        graded = abs(graded_sum(g, 0.0, 1.0, 16, QuadratureConfig(grading_exponent=3.0)) - 4.0 / 3.0)
        uniform = abs(graded_sum(g, 0.0, 1.0, 16, QuadratureConfig(grading_exponent=1.0)) - 4.0 / 3.0)
        assert graded < uniform / 4.0

    def test_empty_interval(self):
        assert integrate(ones, 0.3, 0.3) == 0.0

    def test_reversed_bounds(self):
        with pytest.raises(ParameterError):
            integrate(ones, 1.0, 0.0)

    def test_non_finite_sample(self):
        with pytest.raises(QuadratureError):
            integrate(lambda s: np.full_like(s, np.nan), 0.0, 1.0)

    def test_panel_cap(self):
        cfg = QuadratureConfig(tol=1e-15, max_panels=2)
        with pytest.raises(QuadratureError):
            integrate(lambda s: 1.0 / np.sqrt(s), 0.0, 1.0, cfg)

    @pytest.mark.parametrize(
        "kwargs",
        [{"tol": 0.0}, {"base_nodes": 2}, {"grading_exponent": 0.5}, {"max_panels": 0}],
    )
    def test_config_validation(self, kwargs):
        with pytest.raises(ParameterError):
            QuadratureConfig(**kwargs)


class TestIntegrateJacobi:
    """Test cases for integrate_jacobi."""

    def test_beta_integral(self):
        assert integrate_jacobi(ones, 1.0, 1.0, 0.5) == pytest.approx(4.0 / 15.0, abs=1e-14)

    def test_scaling_in_t(self):
        t = 0.3
        assert integrate_jacobi(ones, t, 1.0, 0.5) == pytest.approx(t**2.5 * 4.0 / 15.0, rel=1e-13)

    def test_smooth_factor(self):
        """int_0^1 s^-0.5 e^s ds = sqrt(pi) erfi(1)."""
        assert integrate_jacobi(np.exp, 1.0, 0.0, -0.5) == pytest.approx(np.sqrt(np.pi) * erfi(1.0), rel=1e-12)

    def test_zero_upper_limit(self):
        assert integrate_jacobi(ones, 0.0, 1.0, 0.5) == 0.0

    def test_invalid_exponents(self):
        with pytest.raises(ParameterError):
            integrate_jacobi(ones, 1.0, -1.0, 0.0)
        with pytest.raises(ParameterError):
            integrate_jacobi(ones, -1.0, 0.0, 0.0)


class TestApplyKernel:
    """Test cases for apply_kernel."""

    def test_classical_midpoint(self):
        params = KernelParams(alpha=2.0, lambda_=0.0, eta=1.0)
        assert apply_kernel(params, ones, 0.5) == pytest.approx(0.125, abs=1e-12)

    def test_left_endpoint(self):
        params = KernelParams(alpha=2.0, lambda_=0.0, eta=1.0)
        assert apply_kernel(params, ones, 0.0) == 0.0

    def test_zero_forcing(self):
        params = KernelParams(alpha=1.5, lambda_=1.6, eta=0.5)
        for t in (0.0, 0.3, 1.0):
            assert apply_kernel(params, np.zeros_like, t) == 0.0

    def test_coupled_closed_form(self):
        """alpha = 2, lambda = 1.6, eta = 1/2: x(t) = t(1-t)/2 + t/12."""
        params = KernelParams(alpha=2.0, lambda_=1.6, eta=0.5)
        for t in (0.25, 0.5, 1.0):
            assert apply_kernel(params, ones, t) == pytest.approx(t * (1.0 - t) / 2.0 + t / 12.0, abs=1e-12)

    def test_split_consistency(self):
        """Agrees with integrating K(t, .) piecewise between its kinks at t and eta."""
        params = KernelParams(alpha=1.5, lambda_=1.6, eta=0.5)
        t = 0.3
        g = lambda s: eval_K_array(params, t, s) * np.exp(s)  # noqa: E731
        direct = sum(integrate(g, a, b) for a, b in [(0.0, t), (t, params.eta), (params.eta, 1.0)])
        assert apply_kernel(params, np.exp, t) == pytest.approx(direct, abs=2e-9)

    def test_t_outside_unit_interval(self):
        params = KernelParams(alpha=1.5, lambda_=0.0, eta=1.0)
        with pytest.raises(ParameterError):
            apply_kernel(params, ones, 1.5)
