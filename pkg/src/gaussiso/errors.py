"""Exception types raised across the package."""


class GaussIsoError(Exception):
    """Base class for all library errors."""


class DomainError(GaussIsoError, ValueError):
    """Argument outside the domain where a function is defined."""


class InvalidPolygon(GaussIsoError, ValueError):
    pass


class InvalidCClass(GaussIsoError, ValueError):
    pass


class NonFinite(GaussIsoError, ArithmeticError):
    """An integrand or residual evaluated to NaN or infinity."""


class BracketError(GaussIsoError, RuntimeError):
    pass


class StalledError(GaussIsoError, RuntimeError):
    """Ascent could not find an improving move at the minimum step size."""
