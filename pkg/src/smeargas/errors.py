"""Exception hierarchy.

Domain errors are raised for invalid inputs; numeric errors for failures that
happen on valid inputs (quadrature non-convergence, underflow). The CLI maps
:class:`ConfigError` to exit code 2 and :class:`NumericError` to exit code 3.
"""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NumericError(ArithmeticError):
    """A numerical procedure failed on otherwise valid input."""


class QuadratureError(NumericError):
    """Adaptive quadrature did not reach the requested tolerance."""


class RatioUndefinedError(NumericError):
    """The large-detector transmittance underflowed to zero."""


class CloudTooLargeError(DomainError):
    """The requested cloud exceeds the configured particle cap."""


class ConfigError(ValueError):
    """A configuration file could not be parsed or validated."""

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
