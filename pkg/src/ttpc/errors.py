"""Exception types raised across the package."""


class TTPCError(Exception):
    """Base class for package errors."""


class InvalidArgument(TTPCError, ValueError):
    """An argument is outside the domain an operation accepts."""


class ConventionMismatch(TTPCError, ValueError):
    """A state uses a vacuum-variance convention the operation cannot accept."""


class SingularInput(TTPCError, ArithmeticError):
    """A quadratic to be minimised has zero curvature."""


class NumericalFailure(TTPCError, ArithmeticError):
    """A factorisation or fit failed numerically."""
