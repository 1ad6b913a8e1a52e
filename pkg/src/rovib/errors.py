"""Exception and warning types raised across the package."""


class RovibError(Exception):
    """Base class for all package errors."""


class InvalidParams(RovibError, ValueError):
    pass


class NumericalFailure(RovibError):
    pass


class UnstableSystem(NumericalFailure):
    """Raised when a spectral quantity is requested for an unstable linear model."""


class SingularMatrix(NumericalFailure):
    pass


class QuadratureNotConverged(NumericalFailure):
    pass


class DegenerateDenominator(NumericalFailure):
    pass


class FlavorMismatch(RovibError, ValueError):
    pass


class GridTooCoarse(RovibError, ValueError):
    pass


class NoResonanceInWindow(RovibError, ValueError):
    pass


class TargetUnreachable(RovibError):
    """The tuner could not balance the couplings; ``result`` holds the best candidate."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConfigError(RovibError, ValueError):
    pass


class ParseError(ConfigError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class UnknownKey(ConfigError):
    pass


class ResonanceMismatch(UserWarning):
    pass


class UnitSanity(UserWarning):
    pass
