"""Exception hierarchy shared by every module.

The CLI maps :class:`ResourceLimitError` to exit code 3 and every other
:class:`HomShiftError` to exit code 2.
"""


class HomShiftError(Exception):
    """Base class for all library errors."""


class InvalidInputError(HomShiftError, ValueError):
    """Malformed or inconsistent input (bad labels, mismatched regions, ...)."""


class PreconditionError(InvalidInputError):
    """An operation's documented precondition does not hold."""


class InvalidParameterError(InvalidInputError):
    pass


class UnsupportedGraphError(HomShiftError):
    """The graph lacks a structural property the operation relies on."""


class UnsupportedRegionError(HomShiftError):
    pass


class NothingToFoldError(HomShiftError):
    """Raised when a fold is requested on a stiff graph."""


class RangeTooLargeError(PreconditionError):
    pass


class ParityError(PreconditionError):
    pass


class ResourceLimitError(HomShiftError):
    """A computation would exceed its configured state budget.

    ``progress`` carries whatever partial information was gathered before
    giving up (for example the number of states already visited).
    """

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress
