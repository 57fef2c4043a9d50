"""Exception types shared across the package."""

from __future__ import annotations


class OffOrbitError(ValueError):
    """A configuration or snapshot does not lie on the orbit it was decoded against."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""
