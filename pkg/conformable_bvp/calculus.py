"""Conformable fractional derivative and integral.

For alpha in (n, n+1] the derivative of an (n+1)-times differentiable f is
computed in product form, D^alpha f(t) = t^(n+1-alpha) f^(n+1)(t), with the
ordinary derivative taken by central differences and one Richardson step.
The integral is I^alpha f(t) = 1/n! int_0^t (t-s)^n s^(alpha-n-1) f(s) ds.

Only n in {0, 1} (alpha in (0, 2]) is supported.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import LimitDivergentError, ParameterError
from .expr import Expression, evaluate_array
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_jacobi

logger = logging.getLogger(__name__)

RealFunction = Callable[[Union[float, np.ndarray]], Union[float, np.ndarray]]

# Relative finite-difference step; the stencil never reaches below t/2.
DEFAULT_STEP = 2e-3
# Right limit at t = 0: t_k = 2^-k * LIMIT_START for k = 0..LIMIT_LEVELS.
LIMIT_START = 1e-2
LIMIT_LEVELS = 12
LIMIT_RTOL = 1e-6


@dataclass(frozen=True)
class Order:
    """A fractional order alpha in (n, n+1] with beta = alpha - n."""

    alpha: float
    n: int
    beta: float

    @classmethod
    def from_alpha(cls, alpha: float) -> "Order":
        if not (0.0 < alpha <= 2.0):
            raise ParameterError(f"alpha must lie in (0, 2], got {alpha}")
        n = math.ceil(alpha) - 1
        return cls(alpha=alpha, n=n, beta=alpha - n)

    def __post_init__(self):
        if not (self.n < self.alpha <= self.n + 1):
            raise ParameterError(f"alpha={self.alpha} is not in ({self.n}, {self.n + 1}]")


def as_order(alpha: Union[float, Order]) -> Order:
    return alpha if isinstance(alpha, Order) else Order.from_alpha(alpha)


def expression_function(e: Expression) -> RealFunction:
    """Wrap an expression in t alone as a RealFunction."""
    if not e.variables() <= {"t"}:
        raise ParameterError(f"expression must depend on t only, found {sorted(e.variables())}")

    def f(t):
        t_arr = np.asarray(t, dtype=float)
        values = evaluate_array(e, t_arr, 0.0)
        return float(values) if values.ndim == 0 else values

    return f


def default_step(t: float) -> float:
    return min(max(DEFAULT_STEP, DEFAULT_STEP * t), t / 4.0)


def _central(f: RealFunction, t: float, h: float, order: int) -> float:
    if order == 1:
        return (f(t + h) - f(t - h)) / (2.0 * h)
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)


def ordinary_derivative(f: RealFunction, t: float, order: int, step: float) -> float:
    """First or second derivative by central differences with one Richardson step."""
    coarse = _central(f, t, step, order)
    fine = _central(f, t, step / 2.0, order)
    value = (4.0 * fine - coarse) / 3.0
    if not math.isfinite(value):
        raise ParameterError(f"non-finite derivative estimate at t = {t:.12g}")
    return value


def _product_form(f: RealFunction, order: Order, t: float, step: Optional[float]) -> float:
    h = default_step(t) if step is None else min(step, t / 2.0)
    derivative = ordinary_derivative(f, t, order.n + 1, h)
    return t ** (order.n + 1 - order.alpha) * derivative


def conformable_derivative(
    f: RealFunction, alpha: Union[float, Order], t: float, step: Optional[float] = None
) -> float:
    """D^alpha f(t) = t^(n+1-alpha) f^(n+1)(t).

    At t = 0 the right limit is taken along t_k = 2^-k * 1e-2, k = 0..12, and
    accepted once three successive values agree within 1e-6 relative.

    Raises:
        ParameterError: t < 0, non-positive step or a non-finite intermediate value.
        LimitDivergentError: The limit at t = 0 does not stabilise.
    """
    order = as_order(alpha)
    if t < 0.0:
        raise ParameterError(f"t must be >= 0, got {t}")
    if step is not None and step <= 0.0:
        raise ParameterError(f"step must be > 0, got {step}")
    if t > 0.0:
        return _product_form(f, order, t, step)

    history = []
    for k in range(LIMIT_LEVELS + 1):
        history.append(_product_form(f, order, LIMIT_START * 2.0**-k, None))
        if len(history) >= 3 and all(_agree(a, b) for a, b in zip(history[-3:], history[-2:])):
            logger.debug("right limit of D^%g f stabilised after %d levels", order.alpha, k + 1)
            return history[-1]
    raise LimitDivergentError(
        f"D^{order.alpha:g} f(t) has no stable limit as t -> 0+ (last values {history[-3:]})"
    )


def _agree(a: float, b: float) -> bool:
    return abs(a - b) <= LIMIT_RTOL * max(1.0, abs(a), abs(b))


def limit_quotient_derivative(
    f: RealFunction, alpha: Union[float, Order], t: float, eps: Optional[Sequence[float]] = None
) -> float:
    """Cross-check oracle using the limit-quotient definition.

    Evaluates (f^(n)(t + eps t^(n+1-alpha)) - f^(n)(t)) / eps on a halving
    eps-sequence and removes the O(eps), O(eps^2), ... error terms with a
    Richardson table.
    """
    order = as_order(alpha)
    if t <= 0.0:
        raise ParameterError(f"t must be > 0, got {t}")
    eps = list(eps) if eps is not None else [1e-2 * 2.0**-k for k in range(5)]

    if order.n == 0:
        base = f
    else:
        h = min(1e-4, t / 4.0)

        def base(u):
            return ordinary_derivative(f, u, 1, h)

    stretch = t ** (order.n + 1 - order.alpha)
    f_t = base(t)
    table = [[(base(t + e * stretch) - f_t) / e for e in eps]]
    for level in range(1, len(eps)):
        previous = table[-1]
        factor = 2.0**level
        table.append([(factor * previous[i + 1] - previous[i]) / (factor - 1.0) for i in range(len(previous) - 1)])
    return table[-1][-1]


def fractional_integral(
    f: RealFunction,
    alpha: Union[float, Order],
    t: float,
    tol: Optional[float] = None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """I^alpha f(t) = 1/n! int_0^t (t-s)^n s^(alpha-n-1) f(s) ds; 0 at t = 0.

    The weight is absorbed into a Gauss-Jacobi rule, which leaves f itself as
    the integrand.

    Raises:
        QuadratureError: The rule does not converge at the requested tolerance.
    """
    order = as_order(alpha)
    if t < 0.0:
        raise ParameterError(f"t must be >= 0, got {t}")
    if t == 0.0:
        return 0.0
    if tol is not None:
        cfg = QuadratureConfig(
            tol=tol, base_nodes=cfg.base_nodes, grading_exponent=cfg.grading_exponent, max_panels=cfg.max_panels
        )
    value = integrate_jacobi(f, t, float(order.n), order.alpha - order.n - 1.0, cfg)
    return value / math.factorial(order.n)


def vectorize(f: Callable[[float], float]) -> RealFunction:
    """Lift a scalar function to one that also accepts numpy arrays."""

    def lifted(t):
        if np.ndim(t) == 0:
            return f(float(t))
        return np.array([f(float(u)) for u in np.ravel(t)]).reshape(np.shape(t))

    return lifted
