"""Data models: problems, sampled solutions, solve results and existence reports."""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ParameterError
from .expr import Expression, to_text
from .kernel import KernelParams

LIMIT_NAMES = ("f0", "f_sup0", "f_inf", "f_supinf")
USER_ASSERTED = "user-asserted"
NUMERICALLY_ESTIMATED = "numerically-estimated"


def format_limit(value: Optional[float]) -> Any:
    """JSON form of a growth number: a float, "inf", or None when undetermined."""
    if value is None:
        return None
    if math.isinf(value):
        return "inf"
    return float(f"{value:.12g}")


def parse_limit(value: Any) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise ParameterError(f"growth limit must be a number or 'inf', got {value!r}")
    value = float(value)
    if not (value >= 0.0):
        raise ParameterError(f"growth limit must be >= 0, got {value}")
    return value


@dataclass(frozen=True)
class ProblemSpec:
    """D^alpha x + f(t, x) = 0, x(0) = 0, x(1) = lambda int_0^eta x, with optional asserted growth limits.

    Construction spot-checks f >= 0 on a grid and raises
    ``HypothesisViolationError`` otherwise.
    """

    params: KernelParams
    f: Expression
    limits: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        # Import here to avoid circular imports
        from .validator import Validator

        validator = Validator()
        validator.validate_limits(self.limits)
        validator.validate_problem(self)

    @property
    def expression_text(self) -> str:
        return to_text(self.f)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the problem-file JSON layout."""
        data: Dict[str, Any] = {
            "alpha": self.params.alpha,
            "lambda": self.params.lambda_,
            "eta": self.params.eta,
            "f": self.expression_text,
        }
        if self.limits:
            data["limits"] = {name: format_limit(value) for name, value in self.limits.items()}
        return data


class GridFunction:
    """A function sampled on ascending nodes of [0, 1] with natural cubic-spline interpolation."""

    MIN_NODES = 4

    def __init__(self, nodes, values):
        self.nodes = np.array(nodes, dtype=float)
        self.values = np.array(values, dtype=float)
        if self.nodes.ndim != 1 or self.nodes.shape != self.values.shape:
            raise ParameterError("nodes and values must be 1-d arrays of equal length")
        if len(self.nodes) < self.MIN_NODES:
            raise ParameterError(f"a grid function needs at least {self.MIN_NODES} nodes")
        if self.nodes[0] != 0.0 or self.nodes[-1] != 1.0:
            raise ParameterError("nodes must start at 0 and end at 1")
        if np.any(np.diff(self.nodes) <= 0.0):
            raise ParameterError("nodes must be strictly ascending")
        self._spline = CubicSpline(self.nodes, self.values, bc_type="natural")

    @classmethod
    def uniform_nodes(cls, grid_n: int) -> np.ndarray:
        if grid_n < cls.MIN_NODES - 1:
            raise ParameterError(f"grid_n must be >= {cls.MIN_NODES - 1}, got {grid_n}")
        nodes = np.linspace(0.0, 1.0, grid_n + 1)
        return nodes

    @classmethod
    def from_function(cls, grid_n: int, f: Callable) -> "GridFunction":
        nodes = cls.uniform_nodes(grid_n)
        return cls(nodes, [f(float(t)) for t in nodes])

    @classmethod
    def zeros(cls, grid_n: int) -> "GridFunction":
        nodes = cls.uniform_nodes(grid_n)
        return cls(nodes, np.zeros_like(nodes))

    def with_values(self, values) -> "GridFunction":
        """Same nodes, new values."""
        return GridFunction(self.nodes, values)

    def __call__(self, t):
        value = self._spline(t)
        return float(value) if np.ndim(value) == 0 else value

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def derivative(self, order: int = 1) -> Callable:
        """Derivative of the interpolating spline.

        Args:
            order: Derivative order, 1 to 3.

        Returns:
            A callable accepting scalar or array t.
        """
        spline = self._spline.derivative(order)
        return lambda t: spline(t)

    def integral(self, a: float, b: float) -> float:
        return float(self._spline.integrate(a, b))

    def distance(self, other: "GridFunction") -> float:
        """Sup-norm distance on the shared node set."""
        if not np.array_equal(self.nodes, other.nodes):
            raise ParameterError("grid functions live on different node sets")
        return float(np.max(np.abs(self.values - other.values)))

    def rows(self) -> List[Tuple[float, float]]:
        """(t, x) pairs in node order, as written to the solution CSV."""
        return list(zip(self.nodes.tolist(), self.values.tolist()))


@dataclass
class Residuals:
    """How well a grid function satisfies the equation, the boundary conditions and the cone inequality."""

    ode_residual_sup: float
    bc0_residual: float
    bc1_residual: float
    min_value: float
    cone_ratio: float
    theta: float
    sup_norm: float

    CONE_SLACK = 1e-9

    @property
    def in_cone(self) -> bool:
        """min over [theta, 1-theta] >= theta^2 ||x||, up to slack; the zero function qualifies."""
        if self.sup_norm == 0.0:
            return self.min_value >= 0.0
        return self.min_value >= -self.CONE_SLACK and self.cone_ratio >= self.theta**2 - self.CONE_SLACK

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ode_residual_sup": self.ode_residual_sup,
            "bc0_residual": self.bc0_residual,
            "bc1_residual": self.bc1_residual,
            "min_value": self.min_value,
            "cone_ratio": self.cone_ratio,
            "theta": self.theta,
            "sup_norm": self.sup_norm,
            "in_cone": self.in_cone,
        }


class SolveStatus(str, Enum):
    CONVERGED = "converged"
    MAX_ITER = "max-iter"
    DIVERGED = "diverged"


@dataclass
class SolveResult:
    """Final iterate of the fixed-point iteration with its diagnostics."""

    solution: GridFunction
    iterations: int
    status: SolveStatus
    update_norm: float
    residuals: Residuals

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED

    @property
    def ode_residual_sup(self) -> float:
        return self.residuals.ode_residual_sup

    @property
    def bc0_residual(self) -> float:
        return self.residuals.bc0_residual

    @property
    def bc1_residual(self) -> float:
        return self.residuals.bc1_residual

    @property
    def min_value(self) -> float:
        return self.residuals.min_value

    def cone_ratio(self, theta: Optional[float] = None) -> float:
        """min over [theta, 1-theta] of the solution divided by its sup norm."""
        if theta is None or theta == self.residuals.theta:
            return self.residuals.cone_ratio
        # Import here to avoid circular imports
        from .solver import cone_ratio

        return cone_ratio(self.solution, theta)

    def summary(self) -> Dict[str, Any]:
        data = {"iterations": self.iterations, "status": self.status.value, "update_norm": self.update_norm}
        data.update(self.residuals.to_dict())
        return data


@dataclass
class GrowthEstimates:
    """The growth numbers f_0, f^0, f_inf, f^inf; None marks an undetermined value."""

    f0: Optional[float]
    f_sup0: Optional[float]
    f_inf: Optional[float]
    f_supinf: Optional[float]
    sources: Dict[str, str] = field(default_factory=dict)

    def value(self, name: str) -> Optional[float]:
        return getattr(self, name)

    def is_asserted(self, name: str) -> bool:
        return self.sources.get(name) == USER_ASSERTED

    @property
    def source(self) -> str:
        kinds = {self.sources.get(name, NUMERICALLY_ESTIMATED) for name in LIMIT_NAMES}
        return kinds.pop() if len(kinds) == 1 else "mixed"

    def ordering_holds(self) -> bool:
        """f_0 <= f^0 and f_inf <= f^inf wherever both sides are determined."""
        pairs = ((self.f0, self.f_sup0), (self.f_inf, self.f_supinf))
        return all(low is None or high is None or low <= high for low, high in pairs)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {name: format_limit(self.value(name)) for name in LIMIT_NAMES}
        data["source"] = self.source
        data["sources"] = {name: self.sources.get(name, NUMERICALLY_ESTIMATED) for name in LIMIT_NAMES}
        return data


class Verdict(str, Enum):
    SATISFIED = "satisfied"
    NOT_SATISFIED = "not-satisfied"
    INCONCLUSIVE = "inconclusive"


@dataclass
class TheoremVerdict:
    verdict: Verdict
    witnesses: List[float] = field(default_factory=list)

    @property
    def satisfied(self) -> bool:
        return self.verdict is Verdict.SATISFIED


@dataclass
class ExistenceReport:
    """Certificates and verdicts of the positive-solution existence criteria."""

    lambda2: float
    lambda1_curve: List[Tuple[float, float]]
    growth: GrowthEstimates
    thm31: TheoremVerdict
    thm32: TheoremVerdict
    cor31: TheoremVerdict

    def to_dict(self) -> Dict[str, Any]:
        witnesses = sorted(set(self.thm31.witnesses) | set(self.thm32.witnesses))
        return {
            "lambda2": float(f"{self.lambda2:.12g}"),
            "lambda1_curve": [[float(f"{theta:.12g}"), float(f"{value:.12g}")] for theta, value in self.lambda1_curve],
            "growth": self.growth.to_dict(),
            "verdicts": {
                "thm31": self.thm31.verdict.value,
                "thm32": self.thm32.verdict.value,
                "cor31": self.cor31.verdict.value,
                "witness_thetas": [float(f"{theta:.12g}") for theta in witnesses],
                "witness_thetas_thm31": [float(f"{theta:.12g}") for theta in self.thm31.witnesses],
                "witness_thetas_thm32": [float(f"{theta:.12g}") for theta in self.thm32.witnesses],
            },
        }
