"""Shared exception types."""


class RwmsoError(Exception):
    """Base class for all errors raised by this package."""


class WidthMismatchError(RwmsoError):
    """Operands declare different label widths."""


class ScaleGuardError(RwmsoError):
    """Input exceeds the size envelope of a brute-force routine."""


class DepthBudgetError(RwmsoError):
    """A characteristic tree is too shallow for the requested operation."""
