"""Exception hierarchy for the conformable BVP toolkit.

Every error raised on purpose by the package derives from ``BVPError``, which
is itself a ``ValueError`` so callers that only guard against bad input keep
working.
"""

from typing import Optional


class BVPError(ValueError):
    """Base class for all errors raised by the package."""


class ExpressionError(BVPError):
    """Base class for problems with a nonlinearity expression."""


class ExpressionSyntaxError(ExpressionError):
    """Malformed expression text.

    Attributes:
        offset: Byte offset into the source text where parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExpressionError):
    """A variable other than t, x or an unsupported function name."""

    def __init__(self, name: str, offset: int, kind: str = "variable"):
        super().__init__(f"unknown {kind} '{name}' at offset {offset}")
        self.name = name
        self.offset = offset
        self.kind = kind


class ExpressionDomainError(ExpressionError):
    """Evaluation left the domain of an operation (log of 0, division by zero, ...)."""

    def __init__(self, operation: str, operand: Optional[str] = None, point: Optional[tuple] = None):
        detail = f"{operation} out of domain"
        if operand is not None:
            detail += f" for operand {operand}"
        if point is not None:
            detail += f" at (t, x) = ({point[0]:.12g}, {point[1]:.12g})"
        super().__init__(detail)
        self.operation = operation
        self.operand = operand
        self.point = point


class ParameterError(BVPError):
    """Invalid numerical parameter (alpha, lambda, eta, theta, tolerances, sizes)."""


class HypothesisViolationError(ParameterError):
    """The nonlinearity is negative somewhere on the spot-check grid."""


class QuadratureError(BVPError):
    """A quadrature did not converge or met a non-finite integrand sample."""


class LimitDivergentError(BVPError):
    """The right limit t -> 0+ of a conformable derivative did not stabilise."""


class ProblemFileError(BVPError):
    """A problem file could not be read or does not match the schema."""
