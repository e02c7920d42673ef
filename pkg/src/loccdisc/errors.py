"""Exception hierarchy shared by the toolkit.

Two failure classes are distinguished because they map to different CLI
exit codes: bad inputs or violated preconditions (exit 2) versus numerical
results that missed a required tolerance (exit 3).
"""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ToolkitError):
    """Invalid input or violated precondition (wrong shape, non-unitary, ...)."""


class ToleranceError(ToolkitError):
    """A computed quantity failed a numerical tolerance contract."""
