"""Quadrature for kernel-weighted integrands on [0, 1].

Two rules are provided:

- ``integrate``: composite Gauss-Legendre on a mesh graded toward the left
  endpoint (panel edges a + (b - a) (k/m)^gamma), doubling the panel count
  until two successive estimates, or their Aitken extrapolations, agree.
- ``integrate_jacobi``: Gauss-Jacobi for integrals whose algebraic weight
  (t - s)^a s^b is known in closed form, doubling the node count instead.

Integrands are called with numpy arrays of abscissae and must return an
array of the same shape (or a scalar, which is broadcast).
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import ParameterError, QuadratureError
from .kernel import KernelParams, eval_G_array, eval_H_array

logger = logging.getLogger(__name__)

RealFunction = Callable[[np.ndarray], np.ndarray]

# Node-count cap for the Gauss-Jacobi rule.
MAX_JACOBI_NODES = 512


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerance and mesh controls shared by every integral in the package."""

    tol: float = 1e-9
    base_nodes: int = 8
    grading_exponent: float = 3.0
    max_panels: int = 4096

    def __post_init__(self):
        if not (self.tol > 0.0):
            raise ParameterError(f"tol must be > 0, got {self.tol}")
        if self.base_nodes < 4:
            raise ParameterError(f"base_nodes must be >= 4, got {self.base_nodes}")
        if not (self.grading_exponent >= 1.0):
            raise ParameterError(f"grading_exponent must be >= 1, got {self.grading_exponent}")
        if self.max_panels < 1:
            raise ParameterError(f"max_panels must be >= 1, got {self.max_panels}")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=None)
def legendre_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = roots_legendre(n)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=None)
def jacobi_rule(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Jacobi rule on [0, 1] for the weight (1 - u)^a u^b."""
    x, w = roots_jacobi(n, a, b)
    return 0.5 * (x + 1.0), w / 2.0 ** (a + b + 1.0)


def graded_edges(a: float, b: float, panels: int, grading_exponent: float) -> np.ndarray:
    k = np.arange(panels + 1) / panels
    edges = a + (b - a) * k**grading_exponent
    edges[-1] = b
    return edges


def _sample(g: RealFunction, points: np.ndarray) -> np.ndarray:
    values = np.broadcast_to(np.asarray(g(points), dtype=float), points.shape)
    if not np.all(np.isfinite(values)):
        bad = points[~np.isfinite(values)][0]
        raise QuadratureError(f"non-finite integrand sample at s = {bad:.12g}")
    return values


def composite_rule(edges: np.ndarray, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Abscissae and weights of the composite Gauss rule on the given panel edges.

    Arrays have shape (panels, nodes); rows follow ascending panels.
    """
    u, w = legendre_rule(nodes)
    widths = np.diff(edges)
    points = edges[:-1, None] + widths[:, None] * u[None, :]
    weights = widths[:, None] * w[None, :]
    return points, weights


def graded_sum(g: RealFunction, a: float, b: float, panels: int, cfg: QuadratureConfig) -> float:
    """One composite estimate with a fixed panel count."""
    points, weights = composite_rule(graded_edges(a, b, panels, cfg.grading_exponent), cfg.base_nodes)
    values = _sample(g, points)
    return math.fsum((values * weights).sum(axis=1))


def aitken(previous: float, middle: float, current: float) -> Optional[float]:
    """Extrapolate three estimates with geometrically shrinking differences to their limit.

    Returns None unless the differences shrink by a ratio in (0, 1).
    """
    d1, d2 = middle - previous, current - middle
    if d1 == 0.0:
        return None
    ratio = d2 / d1
    if not (0.0 < ratio < 1.0):
        return None
    return current + d2 * ratio / (1.0 - ratio)


def integrate(g: RealFunction, a: float, b: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integrate g over [a, b] on a mesh graded toward a.

    g may have an integrable algebraic singularity at a. The panel count
    doubles from one. Two successive estimates closer than ``cfg.tol``
    accept the finer one. A singular first panel makes the error fall
    only algebraically (like m^-3/2 for s^-1/2 at grading 3), so the
    estimates are also extrapolated (Aitken); two successive extrapolated
    values closer than ``cfg.tol`` accept the later one.

    Raises:
        QuadratureError: No agreement within ``cfg.max_panels`` panels, or a non-finite sample.
    """
    if b < a:
        raise ParameterError(f"integration bounds out of order: [{a}, {b}]")
    if a == b:
        return 0.0
    panels = 1
    estimates = [graded_sum(g, a, b, panels, cfg)]
    extrapolated: Optional[float] = None
    while panels * 2 <= cfg.max_panels:
        panels *= 2
        estimates.append(graded_sum(g, a, b, panels, cfg))
        if abs(estimates[-1] - estimates[-2]) < cfg.tol:
            logger.debug("integrate [%g, %g]: %d panels", a, b, panels)
            return estimates[-1]
        if len(estimates) < 3:
            continue
        limit = aitken(*estimates[-3:])
        if limit is not None and extrapolated is not None and abs(limit - extrapolated) < cfg.tol:
            logger.debug("integrate [%g, %g]: %d panels, extrapolated", a, b, panels)
            return limit
        extrapolated = limit
    raise QuadratureError(
        f"integral over [{a:.6g}, {b:.6g}] did not reach tol={cfg.tol:g} within {cfg.max_panels} panels"
    )


def integrate_jacobi(
    g: RealFunction, t: float, a_exp: float, b_exp: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """Integrate (t - s)^a_exp s^b_exp g(s) over [0, t] with a Gauss-Jacobi rule.

    Both exponents must exceed -1. The node count doubles from
    ``cfg.base_nodes`` until successive estimates differ by less than
    ``cfg.tol``.
    """
    if a_exp <= -1.0 or b_exp <= -1.0:
        raise ParameterError(f"Jacobi exponents must exceed -1, got ({a_exp}, {b_exp})")
    if t < 0.0:
        raise ParameterError(f"upper limit must be >= 0, got {t}")
    if t == 0.0:
        return 0.0
    scale = t ** (a_exp + b_exp + 1.0)

    def estimate(n: int) -> float:
        u, w = jacobi_rule(n, a_exp, b_exp)
        return scale * math.fsum(w * _sample(g, t * u))

    n = cfg.base_nodes
    previous = estimate(n)
    while n * 2 <= MAX_JACOBI_NODES:
        n *= 2
        current = estimate(n)
        if abs(current - previous) < cfg.tol:
            return current
        previous = current
    raise QuadratureError(f"Gauss-Jacobi rule did not reach tol={cfg.tol:g} within {MAX_JACOBI_NODES} nodes")


def apply_kernel(params: KernelParams, h: RealFunction, t: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Compute int_0^1 K(t, s) h(s) ds.

    The G part is split at the kink s = t and the H(eta, .) part at s = eta,
    so each piece is smooth apart from the algebraic behaviour at s = 0.
    """
    if not (0.0 <= t <= 1.0):
        raise ParameterError(f"t must lie in [0, 1], got {t}")
    if t == 0.0:
        return 0.0
    alpha = params.alpha

    def g_part(s):
        return eval_G_array(alpha, t, s) * h(s)

    total = integrate(g_part, 0.0, t, cfg) + integrate(g_part, t, 1.0, cfg)
    if params.lambda_ > 0.0:

        def h_part(s):
            return eval_H_array(alpha, params.eta, s) * h(s)

        coupled = integrate(h_part, 0.0, params.eta, cfg) + integrate(h_part, params.eta, 1.0, cfg)
        total += params.coupling * t * coupled
    return total
