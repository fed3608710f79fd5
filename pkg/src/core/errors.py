"""Exception hierarchy shared by all solvers.

Input problems derive from ValueError so callers that already catch ValueError
(as the CLI does for config problems) keep working.
"""


class DelamError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGeometryError(DelamError, ValueError):
    """Curve parameters or scatterer placement are not admissible."""


class InvalidDiscretizationError(DelamError, ValueError):
    """Node counts or quadrature sizes are out of range."""


class InvalidParameterError(DelamError, ValueError):
    """A numerical parameter (step size, exponent, noise level, ...) is out of range."""


class ShapeMismatchError(DelamError, ValueError):
    """Arrays that must agree in shape do not."""


class ConfigValidationError(DelamError, ValueError):
    """Experiment configuration failed validation.

    Attributes:
        errors: Mapping of dotted field name to message.
    """

    def __init__(self, errors):
        self.errors = dict(errors)
        lines = [f"{field}: {msg}" for field, msg in sorted(self.errors.items())]
        super().__init__("Invalid configuration:\n  " + "\n  ".join(lines))


class UnsupportedDomainError(DelamError, ValueError):
    """Special-function argument lies outside the supported envelope."""


class SingularArgumentError(DelamError, ValueError):
    """Evaluation at a singular point (z = 0 for Hankel, x = y for Green's function)."""


class WrongSolverError(DelamError, ValueError):
    """The requested solver does not support the given geometry."""


class NormalizationError(DelamError, ValueError):
    """Indicator cannot be normalized (all values zero)."""


class NearResonanceError(DelamError, ArithmeticError):
    """A linear system is numerically singular at the requested wavenumber."""


class EllTooSmallError(DelamError, ArithmeticError):
    """Beyn column count ell does not exceed the numerical rank of the moment matrix."""
