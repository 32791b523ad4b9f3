"""Exception taxonomy shared across the package.

Three failure categories are distinguished so callers (and the CLI) can react
differently: bad inputs, violated mathematical preconditions, and searches
that were refused because they would exceed a configured size cap.
"""


class CapacityLabError(Exception):
    """Base class for all package errors."""


class InputValidationError(CapacityLabError, ValueError):
    """An argument fails its documented validity constraints."""


class PreconditionError(CapacityLabError, ValueError):
    """Inputs are well formed but a mathematical precondition fails."""


class ResourceLimitError(CapacityLabError, RuntimeError):
    """An exact search was refused because it exceeds a configured cap."""
