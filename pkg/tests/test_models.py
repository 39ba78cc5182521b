"""Unit tests for the data models."""

import math

import numpy as np
import pytest

from conformable_bvp.errors import HypothesisViolationError, ParameterError
from conformable_bvp.expr import parse
from conformable_bvp.kernel import KernelParams
from conformable_bvp.models import (
    NUMERICALLY_ESTIMATED,
    USER_ASSERTED,
    ExistenceReport,
    GridFunction,
    GrowthEstimates,
    ProblemSpec,
    Residuals,
    SolveResult,
    SolveStatus,
    TheoremVerdict,
    Verdict,
    format_limit,
    parse_limit,
)


def make_residuals(**overrides):
    values = dict(
        ode_residual_sup=0.0,
        bc0_residual=0.0,
        bc1_residual=0.0,
        min_value=0.0,
        cone_ratio=0.5,
        theta=0.25,
        sup_norm=1.0,
    )
    values.update(overrides)
    return Residuals(**values)


class TestProblemSpec:
    """Test cases for ProblemSpec."""

    def setup_method(self):
        """Set up test fixtures."""
        self.params = KernelParams(alpha=1.5, lambda_=2.0, eta=1.0 / 3.0)

    def test_valid_problem(self):
        problem = ProblemSpec(self.params, parse("t + exp(-x)"))
        assert problem.expression_text == "t + exp(-x)"
        assert problem.limits == {}

    def test_negative_nonlinearity(self):
        with pytest.raises(HypothesisViolationError, match="nonnegative"):
            ProblemSpec(self.params, parse("x - 1"))

    def test_unknown_limit_name(self):
        with pytest.raises(ParameterError):
            ProblemSpec(self.params, parse("x"), limits={"f_zero": 1.0})

    def test_negative_limit(self):
        with pytest.raises(ParameterError):
            ProblemSpec(self.params, parse("x"), limits={"f0": -1.0})

    def test_to_dict(self):
        problem = ProblemSpec(self.params, parse("t+x"), limits={"f0": math.inf, "f_supinf": 0.0})
        data = problem.to_dict()
        assert data["lambda"] == 2.0
        assert data["f"] == "t + x"
        assert data["limits"] == {"f0": "inf", "f_supinf": 0.0}


class TestLimits:
    """Test cases for growth-limit parsing and formatting."""

    def test_parse(self):
        assert parse_limit("inf") == math.inf
        assert parse_limit(" Infinity ") == math.inf
        assert parse_limit(0.8) == 0.8
        assert parse_limit(3) == 3.0

    @pytest.mark.parametrize("value", ["big", -1.0, float("nan")])
    def test_parse_rejects(self, value):
        with pytest.raises(ParameterError):
            parse_limit(value)

    def test_format(self):
        assert format_limit(None) is None
        assert format_limit(math.inf) == "inf"
        assert format_limit(1.0 / 3.0) == 0.333333333333


class TestGridFunction:
    """Test cases for GridFunction."""

    def test_uniform_nodes(self):
        nodes = GridFunction.uniform_nodes(4)
        assert nodes.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_linear_function_is_exact(self):
        grid = GridFunction.from_function(10, lambda t: 2.0 * t + 1.0)
        assert grid(0.33) == pytest.approx(1.66, abs=1e-14)
        assert grid.integral(0.0, 1.0) == pytest.approx(2.0, abs=1e-14)
        assert grid.derivative(1)(0.5) == pytest.approx(2.0, abs=1e-13)
        assert grid.sup_norm == 3.0
        assert len(grid) == 11

    def test_array_evaluation(self):
        grid = GridFunction.zeros(8)
        assert grid(np.array([0.1, 0.2])).tolist() == [0.0, 0.0]

    def test_distance_and_with_values(self):
        first = GridFunction.from_function(4, lambda t: t)
        second = first.with_values(first.values + 0.5)
        assert first.distance(second) == 0.5
        with pytest.raises(ParameterError):
            first.distance(GridFunction.zeros(8))

    def test_rows(self):
        grid = GridFunction.from_function(3, lambda t: t * t)
        assert grid.rows()[1] == pytest.approx((1 / 3, 1 / 9))

    @pytest.mark.parametrize(
        "nodes,values",
        [
            ([0.0, 0.5, 1.0], [0.0, 0.0, 0.0]),
            ([0.0, 0.5, 0.5, 1.0], [0.0, 0.0, 0.0, 0.0]),
            ([0.1, 0.4, 0.7, 1.0], [0.0, 0.0, 0.0, 0.0]),
            ([0.0, 0.3, 0.6, 1.0], [0.0, 0.0, 0.0]),
        ],
    )
    def test_invalid_grids(self, nodes, values):
        with pytest.raises(ParameterError):
            GridFunction(nodes, values)

    def test_minimum_grid_size(self):
        with pytest.raises(ParameterError):
            GridFunction.uniform_nodes(2)


class TestResiduals:
    """Test cases for Residuals."""

    def test_in_cone(self):
        assert make_residuals(cone_ratio=0.0625).in_cone
        assert not make_residuals(cone_ratio=0.06).in_cone
        assert not make_residuals(min_value=-1e-3).in_cone

    def test_zero_function_is_in_cone(self):
        assert make_residuals(cone_ratio=math.nan, sup_norm=0.0).in_cone

    def test_to_dict(self):
        data = make_residuals().to_dict()
        assert data["in_cone"] is True
        assert data["theta"] == 0.25


class TestSolveResult:
    """Test cases for SolveResult."""

    def test_properties_and_summary(self):
        result = SolveResult(
            solution=GridFunction.zeros(4),
            iterations=3,
            status=SolveStatus.MAX_ITER,
            update_norm=1e-3,
            residuals=make_residuals(bc1_residual=2e-7),
        )
        assert not result.converged
        assert result.bc1_residual == 2e-7
        assert result.cone_ratio() == 0.5
        summary = result.summary()
        assert summary["status"] == "max-iter"
        assert summary["iterations"] == 3

    def test_cone_ratio_for_other_theta(self):
        solution = GridFunction.from_function(40, lambda t: t * (1.0 - t))
        result = SolveResult(solution, 1, SolveStatus.CONVERGED, 0.0, make_residuals())
        assert result.cone_ratio(0.1) == pytest.approx(0.09 / 0.25, rel=1e-9)


class TestGrowthEstimates:
    """Test cases for GrowthEstimates."""

    def test_sources(self):
        growth = GrowthEstimates(
            f0=400.0,
            f_sup0=math.inf,
            f_inf=0.8,
            f_supinf=0.8,
            sources={"f0": USER_ASSERTED, "f_sup0": NUMERICALLY_ESTIMATED},
        )
        assert growth.is_asserted("f0")
        assert not growth.is_asserted("f_inf")
        assert growth.source == "mixed"
        data = growth.to_dict()
        assert data["f_sup0"] == "inf"
        assert data["sources"]["f_inf"] == NUMERICALLY_ESTIMATED

    def test_uniform_source(self):
        growth = GrowthEstimates(1.0, 1.0, 1.0, 1.0)
        assert growth.source == NUMERICALLY_ESTIMATED

    def test_ordering(self):
        assert GrowthEstimates(1.0, 2.0, None, 3.0).ordering_holds()
        assert not GrowthEstimates(2.0, 1.0, None, None).ordering_holds()


class TestExistenceReport:
    """Test cases for ExistenceReport."""

    def test_to_dict(self):
        report = ExistenceReport(
            lambda2=1.875,
            lambda1_curve=[(0.38, 399.0), (0.4, 370.67)],
            growth=GrowthEstimates(400.0, None, None, 0.8),
            thm31=TheoremVerdict(Verdict.SATISFIED, [0.38, 0.4]),
            thm32=TheoremVerdict(Verdict.INCONCLUSIVE),
            cor31=TheoremVerdict(Verdict.INCONCLUSIVE),
        )
        data = report.to_dict()
        assert data["lambda2"] == 1.875
        assert data["lambda1_curve"] == [[0.38, 399.0], [0.4, 370.67]]
        assert data["verdicts"]["thm31"] == "satisfied"
        assert data["verdicts"]["witness_thetas"] == [0.38, 0.4]
        assert data["growth"]["f_sup0"] is None
