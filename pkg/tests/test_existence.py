"""Unit tests for the existence certificates and growth estimates."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conformable_bvp.catalog import EXAMPLE_TWO_THETA_WINDOW, example_problem, example_two_lambda1_closed_form
from conformable_bvp.errors import ParameterError
from conformable_bvp.existence import (
    ExistenceChecker,
    GrowthEstimator,
    check_existence,
    compute_lambda1,
    compute_lambda2,
    estimate_growth,
    lambda2_closed_form,
)
from conformable_bvp.expr import parse
from conformable_bvp.kernel import KernelParams
from conformable_bvp.models import NUMERICALLY_ESTIMATED, USER_ASSERTED, ProblemSpec, Verdict


class TestLambda2:
    """Test cases for compute_lambda2."""

    @pytest.mark.parametrize(
        "alpha,lambda_,eta,expected",
        [(1.5, 1.6, 0.5, 15.0 / 8.0), (2.0, 0.0, 1.0, 6.0), (1.5, 0.0, 1.0, 15.0 / 4.0), (1.5, 2.0, 1.0 / 3.0, 30.0 / 17.0)],
    )
    def test_values(self, alpha, lambda_, eta, expected):
        params = KernelParams(alpha=alpha, lambda_=lambda_, eta=eta)
        assert compute_lambda2(params) == pytest.approx(expected, rel=1e-12)
        assert lambda2_closed_form(params) == pytest.approx(expected, rel=1e-14)


class TestLambda1:
    """Test cases for compute_lambda1."""

    def setup_method(self):
        """Set up test fixtures."""
        self.params = KernelParams(alpha=1.5, lambda_=1.6, eta=0.5)

    def test_example_two_closed_form(self):
        value = compute_lambda1(self.params, 0.4)
        assert value == pytest.approx(370.67, abs=0.01)
        assert value == pytest.approx(example_two_lambda1_closed_form(0.4), rel=1e-6)

    @pytest.mark.parametrize("theta", [0.1, 0.25, 0.38, 0.45])
    def test_closed_form_across_theta(self, theta):
        assert compute_lambda1(self.params, theta) == pytest.approx(example_two_lambda1_closed_form(theta), rel=1e-6)

    def test_small_theta_is_large(self):
        assert compute_lambda1(self.params, 0.01) > 1e6

    def test_eta_outside_window(self):
        params = KernelParams(alpha=1.5, lambda_=1.0, eta=0.9)
        assert compute_lambda1(params, 0.25) > 0.0

    def test_invalid_theta(self):
        with pytest.raises(ParameterError):
            compute_lambda1(self.params, 0.5)

    @settings(max_examples=30, deadline=None)
    @given(
        alpha=st.floats(min_value=1.05, max_value=2.0),
        eta=st.floats(min_value=0.05, max_value=1.0),
        fraction=st.floats(min_value=0.0, max_value=0.95),
        theta=st.floats(min_value=0.02, max_value=0.48),
    )
    def test_dominates_lambda2(self, alpha, eta, fraction, theta):
        """H(eta, s) <= G(s, s) gives Lambda1(theta) >= Lambda2 / theta^4."""
        params = KernelParams(alpha=alpha, lambda_=fraction * 2.0 / eta**2, eta=eta)
        lambda2 = compute_lambda2(params)
        assert compute_lambda1(params, theta) >= lambda2 / theta**4 * (1.0 - 1e-9)


class TestGrowthEstimator:
    """Test cases for GrowthEstimator."""

    def setup_method(self):
        """Set up test fixtures."""
        self.estimator = GrowthEstimator()

    def test_classify(self):
        assert self.estimator.classify([2.0, 1.5, 1.01, 1.005, 1.0]) == 1.0
        assert self.estimator.classify([1e6, 1e7, 1e8]) == math.inf
        assert self.estimator.classify([1e-6, 1e-7, 1e-8]) == 0.0
        assert self.estimator.classify([1.0, 2.0, 3.0]) is None
        assert self.estimator.classify([1.0, 3.0, 2.0]) is None

    def test_example_one(self):
        growth = estimate_growth(parse("t + exp(-x)"))
        assert growth.f0 == math.inf
        assert growth.f_sup0 == math.inf
        assert growth.f_inf == 0.0
        assert growth.f_supinf == 0.0
        assert growth.source == NUMERICALLY_ESTIMATED

    def test_example_two(self):
        growth = estimate_growth(example_problem(2, limits={}).f)
        assert growth.f0 == pytest.approx(400.0, rel=1e-4)
        assert growth.f_sup0 == math.inf
        assert growth.f_inf == pytest.approx(0.8, rel=1e-6)
        assert growth.f_supinf == pytest.approx(0.8, rel=1e-6)
        assert growth.ordering_holds()

    def test_linear(self):
        growth = estimate_growth(parse("x"))
        assert (growth.f0, growth.f_sup0, growth.f_inf, growth.f_supinf) == (1.0, 1.0, 1.0, 1.0)

    @pytest.mark.parametrize(
        "text",
        [
            "t + exp(-x)",
            "t + (4/5)*x*exp(2*x)/(exp(2*x)+exp(x)-999/500)",
            "x",
            "x^2 + t",
            "sqrt(x)",
            "x*(2 + sin(x))",
            "1 + t",
        ],
    )
    def test_estimates_are_ordered(self, text):
        assert estimate_growth(parse(text)).ordering_holds()

    def test_hints_override(self):
        growth = estimate_growth(parse("x"), {"f0": 2.0})
        assert growth.f0 == 2.0
        assert growth.sources["f0"] == USER_ASSERTED
        assert growth.f_inf == 1.0
        assert growth.source == "mixed"

    def test_unknown_hint(self):
        with pytest.raises(ParameterError):
            estimate_growth(parse("x"), {"f_0": 1.0})


class TestExistenceChecker:
    """Test cases for ExistenceChecker and check_existence."""

    def test_example_two_theorem_one(self):
        low, high = EXAMPLE_TWO_THETA_WINDOW
        report = check_existence(example_problem(2), low, high, 51)
        assert report.lambda2 == pytest.approx(1.875, rel=1e-12)
        assert all(value < 400.0 for _, value in report.lambda1_curve)
        assert report.thm31.verdict is Verdict.SATISFIED
        assert len(report.thm31.witnesses) == 51
        assert report.growth.is_asserted("f0")
        assert report.growth.f_sup0 == math.inf
        assert report.thm32.verdict is Verdict.INCONCLUSIVE
        assert report.cor31.verdict is Verdict.INCONCLUSIVE

    def test_example_one_corollary(self):
        report = check_existence(example_problem(1))
        assert report.cor31.verdict is Verdict.SATISFIED
        assert report.thm31.verdict is Verdict.SATISFIED
        assert len(report.lambda1_curve) == 41

    def test_linear_is_inconclusive(self):
        problem = ProblemSpec(KernelParams(alpha=2.0, lambda_=0.0, eta=1.0), parse("x"))
        report = check_existence(problem)
        assert report.thm31.verdict is Verdict.INCONCLUSIVE
        assert report.thm32.verdict is Verdict.INCONCLUSIVE
        assert report.cor31.verdict is Verdict.INCONCLUSIVE

    def test_asserted_violation(self):
        params = KernelParams(alpha=2.0, lambda_=0.0, eta=1.0)
        report = check_existence(ProblemSpec(params, parse("x"), limits={"f_supinf": 5.0}))
        assert report.thm31.verdict is Verdict.NOT_SATISFIED

    def test_asserted_corollary_violation(self):
        params = KernelParams(alpha=2.0, lambda_=0.0, eta=1.0)
        report = check_existence(ProblemSpec(params, parse("x"), limits={"f0": 1.0, "f_inf": 1.0}))
        assert report.cor31.verdict is Verdict.NOT_SATISFIED

    def test_single_theta(self):
        checker = ExistenceChecker(0.25, 0.25, 1)
        assert checker.thetas == [0.25]

    @pytest.mark.parametrize(
        "theta_min,theta_max,steps",
        [(0.3, 0.2, 5), (0.0, 0.2, 5), (0.1, 0.5, 5), (0.1, 0.2, 0), (0.1, 0.2, 1)],
    )
    def test_invalid_range(self, theta_min, theta_max, steps):
        with pytest.raises(ParameterError):
            ExistenceChecker(theta_min, theta_max, steps)
