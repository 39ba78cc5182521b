"""Problem validation for the conformable BVP toolkit."""

import logging
import math
from typing import Dict, List, Tuple

import numpy as np

from .errors import HypothesisViolationError, ParameterError
from .expr import Expression, evaluate_array
from .models import LIMIT_NAMES

logger = logging.getLogger(__name__)


class Validator:
    """Checks the standing hypothesis on f and the shape of asserted growth limits."""

    # Spot-check grid for f >= 0 on [0, 1] x [0, inf)
    T_GRID = tuple(k / 10 for k in range(11))
    X_GRID = (0.0, 0.5, 1.0, 10.0, 100.0)

    def __init__(self):
        """Initialize the validator."""
        t, x = np.meshgrid(np.array(self.T_GRID), np.array(self.X_GRID), indexing="ij")
        self._t = t.ravel()
        self._x = x.ravel()

    def negative_samples(self, f: Expression) -> List[Tuple[float, float, float]]:
        """Grid points (t, x, f) where f is negative.

        Raises:
            ExpressionDomainError: If f cannot be evaluated at a grid point.
        """
        values = evaluate_array(f, self._t, self._x)
        bad = values < 0.0
        return [(float(t), float(x), float(v)) for t, x, v in zip(self._t[bad], self._x[bad], values[bad])]

    def is_nonnegative(self, f: Expression) -> bool:
        return not self.negative_samples(f)

    def validate_problem(self, problem) -> None:
        """Spot-check f(t, x) >= 0 on the validation grid.

        Raises:
            HypothesisViolationError: f is negative somewhere on the grid.
        """
        negatives = self.negative_samples(problem.f)
        if negatives:
            t, x, value = negatives[0]
            logger.debug("f < 0 at %d grid points", len(negatives))
            raise HypothesisViolationError(
                f"f must be nonnegative on [0,1] x [0,inf): f({t:g}, {x:g}) = {value:.12g}"
            )

    def validate_limits(self, limits: Dict[str, float]) -> None:
        """Asserted growth limits must use known names and be nonnegative reals or +inf."""
        for name, value in limits.items():
            if name not in LIMIT_NAMES:
                raise ParameterError(f"unknown growth limit '{name}' (expected one of {', '.join(LIMIT_NAMES)})")
            if not isinstance(value, (int, float)) or math.isnan(value) or value < 0.0:
                raise ParameterError(f"growth limit '{name}' must be a nonnegative number or inf, got {value!r}")
