"""Exception hierarchy shared by the numerical modules and the CLI.

The CLI maps :class:`InputError` subclasses to exit code 1 and
:class:`NumericalError` subclasses to exit code 2.
"""


class HyperCSError(Exception):
    """Base class for all package errors."""


class InputError(HyperCSError, ValueError):
    """Malformed or inadmissible input."""


class ValidationError(InputError):
    """Model parameters violate positivity or arity constraints."""


class ZeroRadiusError(ValidationError):
    """p > q + 1: the normalization series has zero radius of convergence."""


class DomainError(InputError):
    """Argument outside the mathematical domain of a function."""


class TruncationError(InputError):
    """Requested Fock level lies beyond the truncation."""


class ShapeError(InputError):
    """Operator and state do not live on the same truncated space."""


class UnsupportedKernelError(InputError):
    """No elementary quadrature kernel exists for the requested family."""


class NumericalError(HyperCSError, ArithmeticError):
    """A numerical procedure could not deliver its contract."""


class DivergenceError(NumericalError):
    """Argument at or beyond the radius of convergence."""


class ConvergenceError(NumericalError):
    """Tolerance not reached within the iteration or truncation cap."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested accuracy."""
