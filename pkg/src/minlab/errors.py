"""Exception hierarchy shared by all minlab modules.

Exit-code mapping used by the CLI: MissingInputError -> 2,
ResourceError -> 3, DegenerateError -> 4, NumericalError -> 5.
"""


class MinlabError(Exception):
    """Base class for all minlab errors."""


class ArgumentError(MinlabError):
    """Invalid argument: non-finite parameter, bad radii schedule, etc."""


class RangeError(MinlabError):
    """A requested quantity overflows the floating-point range."""


class ResourceError(MinlabError):
    """A resource cap (e.g. vertex budget) would be exceeded."""

    def __init__(self, message, required=None, cap=None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class DegenerateError(MinlabError):
    """Degenerate input: constant field, radius below mesh resolution, ..."""


class NumericalError(MinlabError):
    """A numerical procedure failed (e.g. CG did not converge)."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class MissingInputError(MinlabError):
    """A required input file or prior run output is missing."""
