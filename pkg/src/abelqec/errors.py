"""Exception types shared across the package."""

from __future__ import annotations


class AbelqecError(Exception):
    """Base class for all package-specific errors."""


class ResourceLimitError(AbelqecError):
    """Raised when a requested object exceeds a configured enumeration or dimension cap."""


class InvariantViolationError(AbelqecError):
    """Raised when an internal consistency check fails (e.g. collapsing onto a ~zero branch)."""
