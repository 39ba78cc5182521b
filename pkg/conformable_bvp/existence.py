"""Existence certificates for positive solutions.

Lambda2 = [(1 + c) int_0^1 G(s, s) ds]^-1 and
Lambda1(theta) = [theta^4 int_theta^(1-theta) (G(s, s) + c H(eta, s)) ds]^-1,
with c = lambda / (2 - lambda eta^2), are compared against the growth numbers

    f0     = lim_{x->0+}  min_t f(t, x)/x      f_sup0   = lim_{x->0+}  max_t f(t, x)/x
    f_inf  = lim_{x->inf} min_t f(t, x)/x      f_supinf = lim_{x->inf} max_t f(t, x)/x

Both criteria are sufficient only: a failed inequality makes a verdict
inconclusive unless it fails for a user-asserted limit.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .errors import ParameterError, QuadratureError
from .expr import Expression, evaluate_mp
from .kernel import KernelParams, check_theta, diag_G_array, eval_H_array
from .models import (
    LIMIT_NAMES,
    NUMERICALLY_ESTIMATED,
    USER_ASSERTED,
    ExistenceReport,
    GrowthEstimates,
    ProblemSpec,
    TheoremVerdict,
    Verdict,
)
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate, integrate_jacobi

logger = logging.getLogger(__name__)

LAMBDA2_RTOL = 1e-10


def lambda2_closed_form(params: KernelParams) -> float:
    """[(1 + c) / (alpha (alpha + 1))]^-1, using int_0^1 (1 - s) s^(alpha-1) ds = 1/(alpha (alpha + 1))."""
    alpha = params.alpha
    return alpha * (alpha + 1.0) / (1.0 + params.coupling)


def compute_lambda2(params: KernelParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Lambda2 by quadrature of the diagonal G(s, s) = (1 - s) s^(alpha-1).

    Raises:
        QuadratureError: The quadrature disagrees with the closed form beyond 1e-10 relative.
    """
    integral = integrate_jacobi(np.ones_like, 1.0, 1.0, params.alpha - 1.0, cfg)
    value = 1.0 / ((1.0 + params.coupling) * integral)
    expected = lambda2_closed_form(params)
    if abs(value - expected) > LAMBDA2_RTOL * expected:
        raise QuadratureError(f"Lambda2 quadrature {value:.15g} disagrees with closed form {expected:.15g}")
    return value


def compute_lambda1(params: KernelParams, theta: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Lambda1(theta); the integral is split at eta when eta lies inside (theta, 1 - theta)."""
    check_theta(theta)
    alpha, eta, coupling = params.alpha, params.eta, params.coupling

    def integrand(s):
        return diag_G_array(alpha, s) + coupling * eval_H_array(alpha, eta, s)

    low, high = theta, 1.0 - theta
    breaks = [low, eta, high] if low < eta < high else [low, high]
    integral = sum(integrate(integrand, a, b, cfg) for a, b in zip(breaks[:-1], breaks[1:]))
    return 1.0 / (theta**4 * integral)


class GrowthEstimator:
    """Numerical estimates of the growth numbers by sampling f(t, x)/x.

    The quotient is minimised and maximised over a uniform t-grid at
    x = 10^k, moving toward the limit. A limit is finite when the last three
    samples agree within 1 %, infinite (zero) when they increase past 1e8
    (decrease below 1e-8), and undetermined otherwise.
    """

    T_POINTS = 101
    ZERO_EXPONENTS = (-2, -3, -4, -5, -6, -7, -8)
    INFINITY_EXPONENTS = (2, 3, 4, 5, 6, 7, 8)
    AGREEMENT = 0.01
    INFINITY_THRESHOLD = 1e8
    ZERO_THRESHOLD = 1e-8
    PRECISION = 30
    # Keeps mpmath quotients inside double range before conversion.
    CEILING = 1e300

    def __init__(self):
        """Initialize the estimator."""
        self.t_grid = np.linspace(0.0, 1.0, self.T_POINTS)

    def quotient_range(self, f: Expression, x: float) -> Tuple[float, float]:
        """(min_t, max_t) of f(t, x)/x over the t-grid."""
        with mpmath.workdps(self.PRECISION):
            xm = mpmath.mpf(x)
            quotients = [evaluate_mp(f, mpmath.mpf(float(t)), xm) / xm for t in self.t_grid]
            ceiling = mpmath.mpf(self.CEILING)
            low = float(max(min(min(quotients), ceiling), -ceiling))
            high = float(max(min(max(quotients), ceiling), -ceiling))
        return low, high

    def _agree(self, a: float, b: float) -> bool:
        return abs(a - b) <= self.AGREEMENT * max(abs(a), abs(b))

    def classify(self, samples: Sequence[float]) -> Optional[float]:
        """Limit of a sequence ordered toward the limit point, or None when undetermined."""
        a, b, c = samples[-3:]
        if self._agree(a, b) and self._agree(b, c):
            return c
        if a < b < c and c >= self.INFINITY_THRESHOLD * (1.0 - self.AGREEMENT):
            return math.inf
        if a > b > c and c <= self.ZERO_THRESHOLD * (1.0 + self.AGREEMENT):
            return 0.0
        return None

    def sample(self, f: Expression) -> Dict[str, Optional[float]]:
        """Estimate all four growth numbers."""
        near_zero = [self.quotient_range(f, 10.0**k) for k in self.ZERO_EXPONENTS]
        near_inf = [self.quotient_range(f, 10.0**k) for k in self.INFINITY_EXPONENTS]
        estimates = {
            "f0": self.classify([low for low, _ in near_zero]),
            "f_sup0": self.classify([high for _, high in near_zero]),
            "f_inf": self.classify([low for low, _ in near_inf]),
            "f_supinf": self.classify([high for _, high in near_inf]),
        }
        logger.debug("sampled growth numbers: %s", estimates)
        return estimates

    def estimate(self, f: Expression, hints: Optional[Dict[str, float]] = None) -> GrowthEstimates:
        """Growth numbers with user-asserted hints overriding samples field by field.

        Raises:
            ExpressionDomainError: f cannot be evaluated at a sample point.
        """
        hints = dict(hints or {})
        unknown = set(hints) - set(LIMIT_NAMES)
        if unknown:
            raise ParameterError(f"unknown growth limit(s): {', '.join(sorted(unknown))}")
        values: Dict[str, Optional[float]] = dict(hints)
        sources = {name: USER_ASSERTED for name in hints}
        if len(hints) < len(LIMIT_NAMES):
            sampled = self.sample(f)
            for name in LIMIT_NAMES:
                if name not in hints:
                    values[name] = sampled[name]
                    sources[name] = NUMERICALLY_ESTIMATED
        return GrowthEstimates(sources=sources, **{name: values[name] for name in LIMIT_NAMES})


def estimate_growth(f: Expression, hints: Optional[Dict[str, float]] = None) -> GrowthEstimates:
    return GrowthEstimator().estimate(f, hints)


class ExistenceChecker:
    """Evaluates the two growth criteria and their superlinear/sublinear corollary over a theta-grid."""

    THETA_MIN = 0.05
    THETA_MAX = 0.45
    THETA_STEPS = 41

    def __init__(
        self,
        theta_min: float = THETA_MIN,
        theta_max: float = THETA_MAX,
        theta_steps: int = THETA_STEPS,
        cfg: QuadratureConfig = DEFAULT_CONFIG,
    ):
        """Initialize the checker.

        Raises:
            ParameterError: The theta range is empty or leaves (0, 1/2).
        """
        check_theta(theta_min)
        check_theta(theta_max)
        if theta_min > theta_max:
            raise ParameterError(f"theta_min ({theta_min}) must not exceed theta_max ({theta_max})")
        if theta_steps < 1:
            raise ParameterError(f"theta_steps must be >= 1, got {theta_steps}")
        if theta_steps == 1 and theta_min != theta_max:
            raise ParameterError("a single theta step needs theta_min == theta_max")
        self.thetas = [float(theta) for theta in np.linspace(theta_min, theta_max, theta_steps)]
        self.cfg = cfg

    def lambda1_curve(self, params: KernelParams) -> List[Tuple[float, float]]:
        return [(theta, compute_lambda1(params, theta, self.cfg)) for theta in self.thetas]

    @staticmethod
    def _growth_criterion(
        growth: GrowthEstimates,
        bounded: str,
        bound: float,
        large: str,
        curve: List[Tuple[float, float]],
    ) -> TheoremVerdict:
        """growth.bounded < bound and growth.large > Lambda1(theta) for some theta in the curve."""
        small_value = growth.value(bounded)
        large_value = growth.value(large)
        witnesses = []
        if large_value is not None:
            witnesses = [theta for theta, lambda1 in curve if large_value > lambda1]
        if small_value is not None and small_value < bound and witnesses:
            return TheoremVerdict(Verdict.SATISFIED, witnesses)
        refuted = (growth.is_asserted(bounded) and small_value >= bound) or (
            growth.is_asserted(large) and not witnesses
        )
        return TheoremVerdict(Verdict.NOT_SATISFIED if refuted else Verdict.INCONCLUSIVE, witnesses)

    @staticmethod
    def _corollary(growth: GrowthEstimates) -> TheoremVerdict:
        """f0 = inf and f_supinf = 0 (superlinear), or f_sup0 = 0 and f_inf = inf (sublinear)."""
        alternatives = (("f0", "f_supinf"), ("f_inf", "f_sup0"))
        for infinite, zero in alternatives:
            if growth.value(infinite) == math.inf and growth.value(zero) == 0.0:
                return TheoremVerdict(Verdict.SATISFIED)

        def refuted(infinite: str, zero: str) -> bool:
            return (growth.is_asserted(infinite) and growth.value(infinite) != math.inf) or (
                growth.is_asserted(zero) and growth.value(zero) != 0.0
            )

        if all(refuted(infinite, zero) for infinite, zero in alternatives):
            return TheoremVerdict(Verdict.NOT_SATISFIED)
        return TheoremVerdict(Verdict.INCONCLUSIVE)

    def check(self, problem: ProblemSpec) -> ExistenceReport:
        params = problem.params
        lambda2 = compute_lambda2(params, self.cfg)
        curve = self.lambda1_curve(params)
        growth = estimate_growth(problem.f, problem.limits or None)
        report = ExistenceReport(
            lambda2=lambda2,
            lambda1_curve=curve,
            growth=growth,
            thm31=self._growth_criterion(growth, "f_supinf", lambda2 / 2.0, "f0", curve),
            thm32=self._growth_criterion(growth, "f_sup0", lambda2, "f_inf", curve),
            cor31=self._corollary(growth),
        )
        logger.info(
            "verdicts: thm31=%s thm32=%s cor31=%s",
            report.thm31.verdict.value,
            report.thm32.verdict.value,
            report.cor31.verdict.value,
        )
        return report


def check_existence(
    problem: ProblemSpec,
    theta_min: float = ExistenceChecker.THETA_MIN,
    theta_max: float = ExistenceChecker.THETA_MAX,
    theta_steps: int = ExistenceChecker.THETA_STEPS,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> ExistenceReport:
    """Lambda2, the Lambda1 curve, the growth numbers and the three verdicts for a problem."""
    return ExistenceChecker(theta_min, theta_max, theta_steps, cfg).check(problem)
