"""Exceptions raised by pyhausdorff."""
from typing import Optional


class HausdorffError(Exception):
    """Base class for all library errors."""


class InputError(HausdorffError, ValueError):
    """Malformed input or mismatched dimensions."""


class ValidationError(InputError):
    """A point set failed validation.

    `index` is the position of the first offending point, when there is one.
    """

    def __init__(self, message: str, index: Optional[int] = None):
        """Initialize with the offending point index."""
        super().__init__(message)
        self.index = index


class ParameterError(InputError):
    """Invalid eps, alpha or root."""


class FormatError(InputError):
    """Tree file could not be loaded."""


class IncompatibleError(InputError):
    """Two sets or trees do not share a metric and dimension."""


class InvariantError(HausdorffError):
    """An internal invariant was violated."""
