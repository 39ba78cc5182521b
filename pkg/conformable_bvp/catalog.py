"""Worked example problems."""

import math
from typing import Dict, Optional

from .errors import ParameterError
from .expr import parse
from .kernel import KernelParams, check_theta
from .models import ProblemSpec

# Superlinear at 0 and sublinear at infinity: f0 = inf, f_supinf = 0.
EXAMPLE_ONE = {"alpha": 1.5, "lambda_": 2.0, "eta": 1.0 / 3.0, "f": "t + exp(-x)"}

EXAMPLE_TWO = {
    "alpha": 1.5,
    "lambda_": 8.0 / 5.0,
    "eta": 0.5,
    "f": "t + (4/5)*x*exp(2*x)/(exp(2*x)+exp(x)-999/500)",
}
EXAMPLE_TWO_LIMITS = {"f0": 400.0, "f_supinf": 0.8}
# Window on which Lambda1(theta) < f0 = 400.
EXAMPLE_TWO_THETA_WINDOW = (19.0 / 50.0, 21.0 / 50.0)

EXAMPLES = {1: EXAMPLE_ONE, 2: EXAMPLE_TWO}


def example_problem(which: int, limits: Optional[Dict[str, float]] = None) -> ProblemSpec:
    """One of the two worked examples.

    Args:
        which: 1 or 2.
        limits: Asserted growth limits; example 2 defaults to f0 = 400, f_supinf = 4/5.

    Raises:
        ParameterError: If ``which`` is not a known example.
    """
    if which not in EXAMPLES:
        raise ParameterError(f"unknown example {which} (expected 1 or 2)")
    data = EXAMPLES[which]
    if limits is None:
        limits = dict(EXAMPLE_TWO_LIMITS) if which == 2 else {}
    params = KernelParams(alpha=data["alpha"], lambda_=data["lambda_"], eta=data["eta"])
    return ProblemSpec(params=params, f=parse(data["f"]), limits=limits)


def example_two_lambda1_closed_form(theta: float) -> float:
    """Lambda1(theta) for example 2 from its closed-form integral."""
    check_theta(theta)
    integral = (
        (24.0 * theta - 35.0) * theta * math.sqrt(theta)
        + 3.0 * (6.0 + 3.0 * theta - 4.0 * theta**2) * math.sqrt(1.0 - theta)
        - 4.0 * math.sqrt(2.0)
    ) / 30.0
    return 1.0 / (theta**4 * integral)


def integral_condition_problem(alpha: float, lambda_: float, f: str) -> ProblemSpec:
    """The eta = 1 case x(1) = lambda int_0^1 x, for which H(1, s) = G(s, s)."""
    return ProblemSpec(params=KernelParams(alpha=alpha, lambda_=lambda_, eta=1.0), f=parse(f))
