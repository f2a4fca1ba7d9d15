"""Exception types shared across the package."""


class GammadexError(Exception):
    """Base class for every error this package raises on purpose."""


class DomainError(GammadexError, ValueError):
    """An argument is outside the mathematical domain (non-positive, NaN, ...)."""


class SizeError(GammadexError, ValueError):
    """A sample or replicate count is too small for the requested operation."""


class DataError(GammadexError, ValueError):
    """An input file or data record cannot be turned into a valid sample."""


class NumericError(GammadexError, ArithmeticError):
    """A numerical routine failed to converge or exhausted its iteration budget."""
