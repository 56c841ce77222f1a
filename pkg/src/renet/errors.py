"""Root of the package exception hierarchy."""


class RenetError(Exception):
    """Base class for all errors raised by this package."""
