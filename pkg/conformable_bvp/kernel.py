"""Green's kernels of the integral boundary value problem.

For 1 < alpha <= 2, 0 <= lambda < 2/eta^2 and 0 < eta <= 1 the linear problem
D^alpha x + h = 0, x(0) = 0, x(1) = lambda * int_0^eta x is solved by
x(t) = int_0^1 K(t, s) h(s) ds with

    K(t, s) = G(t, s) + lambda * t / (2 - lambda * eta^2) * H(eta, s)

    G(t, s) = (1 - t) s^(alpha-1)            s <= t
              t (1 - s) s^(alpha-2)          t <= s

    H(t, s) = (2t - t^2 - s) s^(alpha-1)     s <= t
              t^2 (1 - s) s^(alpha-2)        t <= s

Both kernels are extended by 0 on the column s = 0.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .errors import ParameterError

logger = logging.getLogger(__name__)

# Smallest admissible 2 - lambda*eta^2.
DENOMINATOR_MARGIN = 1e-9
# Floating slack used when checking the kernel inequalities.
BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class KernelParams:
    """The parameters alpha, lambda and eta of the boundary value problem."""

    alpha: float
    lambda_: float
    eta: float

    def __post_init__(self):
        if not (1.0 < self.alpha <= 2.0):
            raise ParameterError(f"alpha must lie in (1, 2], got {self.alpha}")
        if not (self.lambda_ >= 0.0) or not np.isfinite(self.lambda_):
            raise ParameterError(f"lambda must be a finite number >= 0, got {self.lambda_}")
        if not (0.0 < self.eta <= 1.0):
            raise ParameterError(f"eta must lie in (0, 1], got {self.eta}")
        if 2.0 - self.lambda_ * self.eta**2 < DENOMINATOR_MARGIN:
            raise ParameterError("lambda*eta^2 must be < 2")

    @property
    def coupling(self) -> float:
        """lambda / (2 - lambda*eta^2), the weight of the H(eta, .) term."""
        return self.lambda_ / (2.0 - self.lambda_ * self.eta**2)


@dataclass(frozen=True)
class ConeParams:
    """The theta defining the cone of nonnegative functions with min over [theta, 1-theta] >= theta^2 ||x||."""

    theta: float

    def __post_init__(self):
        check_theta(self.theta)

    @property
    def window(self):
        return self.theta, 1.0 - self.theta

    @property
    def floor(self) -> float:
        return self.theta**2


def check_theta(theta: float) -> float:
    if not (0.0 < theta < 0.5):
        raise ParameterError("theta must lie in (0, 1/2)")
    return theta


def _power(s: np.ndarray, p: float) -> np.ndarray:
    """s**p for s >= 0, with 0 on the column s = 0."""
    if p == 0.0:
        return np.ones_like(s)
    if p == 1.0:
        return s.copy()
    out = np.zeros_like(s)
    positive = s > 0
    out[positive] = np.exp(p * np.log(s[positive]))
    return out


def eval_G_array(alpha: float, t, s) -> np.ndarray:
    """Vectorised G(t, s); t and s broadcast against each other."""
    t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
    lower = s <= t
    out = np.where(lower, (1.0 - t) * _power(s, alpha - 1.0), 0.0)
    upper = ~lower & (s > 0)
    out[upper] = t[upper] * (1.0 - s[upper]) * _power(s[upper], alpha - 2.0)
    return out


def eval_H_array(alpha: float, t, s) -> np.ndarray:
    """Vectorised H(t, s); t and s broadcast against each other."""
    t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
    lower = s <= t
    out = np.where(lower, (2.0 * t - t * t - s) * _power(s, alpha - 1.0), 0.0)
    upper = ~lower & (s > 0)
    out[upper] = t[upper] ** 2 * (1.0 - s[upper]) * _power(s[upper], alpha - 2.0)
    return out


def eval_K_array(params: KernelParams, t, s) -> np.ndarray:
    """Vectorised K(t, s) = G(t, s) + lambda t / (2 - lambda eta^2) H(eta, s)."""
    t = np.asarray(t, dtype=float)
    g = eval_G_array(params.alpha, t, s)
    if params.lambda_ == 0.0:
        return g
    return g + params.coupling * t * eval_H_array(params.alpha, params.eta, s)


def diag_G_array(alpha: float, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    return (1.0 - s) * _power(s, alpha - 1.0)


def rho_array(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return np.minimum(t * t, t * (1.0 - t))


def _check_unit(name: str, value: float):
    if not (0.0 <= value <= 1.0):
        raise ParameterError(f"{name} must lie in [0, 1], got {value}")


def eval_G(alpha: float, t: float, s: float) -> float:
    """G(t, s) of the problem; 0 at s = 0 by continuous extension."""
    _check_unit("t", t)
    _check_unit("s", s)
    return float(eval_G_array(alpha, t, s))


def eval_H(alpha: float, t: float, s: float) -> float:
    """H(t, s) of the problem; 0 at s = 0 by continuous extension."""
    _check_unit("t", t)
    _check_unit("s", s)
    return float(eval_H_array(alpha, t, s))


def eval_K(params: KernelParams, t: float, s: float) -> float:
    """K(t, s) = G(t, s) + lambda t / (2 - lambda eta^2) H(eta, s)."""
    _check_unit("t", t)
    _check_unit("s", s)
    return float(eval_K_array(params, t, s))


def rho(t: float) -> float:
    """min(t^2, t(1 - t)): the lower-bound factor of H(t, s) / G(s, s)."""
    _check_unit("t", t)
    return float(rho_array(t))


def diag_G(alpha: float, s: float) -> float:
    """G(s, s) = (1 - s) s^(alpha-1)."""
    _check_unit("s", s)
    return float(diag_G_array(alpha, s))


@dataclass
class BoundReport:
    """Outcome of sampling the kernel inequalities.

    ``violations`` counts samples outside each inequality by more than the
    slack; ``worst_margin`` is the smallest (bound - value) seen, negative
    when an inequality is broken.
    """

    params: KernelParams
    theta: float
    samples: int
    violations: Dict[str, int] = field(default_factory=dict)
    worst_margin: Dict[str, float] = field(default_factory=dict)

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())

    def merge(self, other: "BoundReport") -> "BoundReport":
        """Combine two reports over disjoint samples of the same checks."""
        merged = BoundReport(self.params, self.theta, self.samples + other.samples)
        for name in set(self.violations) | set(other.violations):
            merged.violations[name] = self.violations.get(name, 0) + other.violations.get(name, 0)
            merged.worst_margin[name] = min(
                self.worst_margin.get(name, np.inf), other.worst_margin.get(name, np.inf)
            )
        return merged


def check_kernel_bounds(
    params: KernelParams, theta: float, samples: int, seed: int = 0, slack: float = BOUND_SLACK
) -> BoundReport:
    """Sample (t, s) pairs and check the kernel bounds.

    Checks, with s drawn from (0, 1]:

    - ``G_window``: theta^2 G(s,s) <= G(t,s) <= G(s,s) for t in [theta, 1-theta]
    - ``H_rho``:    rho(t) G(s,s) <= H(t,s) <= G(s,s) for t in (0, 1]
    - ``H_window``: theta^2 G(s,s) <= H(t,s) <= G(s,s) for t in [theta, 1-theta]
    - ``K_nonnegative``: K(t,s) >= 0 for t in [0, 1]

    The draw is reproducible for a given seed.
    """
    check_theta(theta)
    if samples < 1:
        raise ParameterError(f"samples must be >= 1, got {samples}")
    rng = np.random.default_rng(seed)
    s = 1.0 - rng.random(samples)
    t_all = 1.0 - rng.random(samples)
    t_window = theta + (1.0 - 2.0 * theta) * rng.random(samples)
    alpha = params.alpha
    gss = diag_G_array(alpha, s)

    margins = {}
    g_win = eval_G_array(alpha, t_window, s)
    margins["G_window"] = np.minimum(gss - g_win, g_win - theta**2 * gss)
    h_all = eval_H_array(alpha, t_all, s)
    margins["H_rho"] = np.minimum(gss - h_all, h_all - rho_array(t_all) * gss)
    h_win = eval_H_array(alpha, t_window, s)
    margins["H_window"] = np.minimum(gss - h_win, h_win - theta**2 * gss)
    margins["K_nonnegative"] = eval_K_array(params, t_all, s)

    report = BoundReport(params=params, theta=theta, samples=samples)
    for name, margin in margins.items():
        report.violations[name] = int(np.count_nonzero(margin < -slack))
        report.worst_margin[name] = float(margin.min())
    logger.debug("kernel bounds %s theta=%g: %s", params, theta, report.violations)
    return report
