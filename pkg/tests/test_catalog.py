"""Unit tests for the worked examples."""

import pytest

from conformable_bvp.catalog import (
    EXAMPLE_TWO_LIMITS,
    example_problem,
    example_two_lambda1_closed_form,
    integral_condition_problem,
)
from conformable_bvp.errors import ParameterError
from conformable_bvp.kernel import diag_G, eval_H


class TestCatalog:
    """Test cases for the example catalog."""

    def test_example_one(self):
        problem = example_problem(1)
        assert problem.params.alpha == 1.5
        assert problem.params.lambda_ == 2.0
        assert problem.params.eta == pytest.approx(1.0 / 3.0)
        assert problem.limits == {}

    def test_example_two_defaults_to_asserted_limits(self):
        problem = example_problem(2)
        assert problem.params.coupling == pytest.approx(1.0)
        assert problem.limits == EXAMPLE_TWO_LIMITS

    def test_example_two_without_limits(self):
        assert example_problem(2, limits={}).limits == {}

    def test_unknown_example(self):
        with pytest.raises(ParameterError, match="unknown example"):
            example_problem(3)

    def test_lambda1_closed_form(self):
        assert example_two_lambda1_closed_form(0.4) == pytest.approx(370.67, abs=0.01)
        with pytest.raises(ParameterError):
            example_two_lambda1_closed_form(0.5)

    def test_integral_condition_problem(self):
        problem = integral_condition_problem(1.7, 1.5, "t + x")
        assert problem.params.eta == 1.0
        for s in (0.1, 0.5, 0.9):
            assert eval_H(1.7, problem.params.eta, s) == pytest.approx(diag_G(1.7, s), abs=1e-15)
