"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: UsageError -> 2, ResourceBudgetError -> 3,
PropertyViolationError and GeometryViolationError -> 4.
"""


class UsageError(ValueError):
    """Caller violated a documented precondition."""


class ResourceBudgetError(RuntimeError):
    """A computation exceeded its explicit budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class GeometryViolationError(RuntimeError):
    """A geometry failed an axiom it was supposed to satisfy."""


class PropertyViolationError(RuntimeError):
    """A verified family or geometry produced an inconsistent answer."""
