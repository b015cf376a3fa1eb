"""Exception types shared across the library."""


class IvpError(Exception):
    """Base class for all library-specific errors."""


class PreconditionError(IvpError, ValueError):
    """An argument violated a documented precondition."""


class ResourceLimitError(IvpError):
    """An exact computation would exceed a configured enumeration cap.

    Raised instead of returning a possibly-wrong answer.  The message
    carries the cap that was hit and the size that was requested.
    """

    def __init__(self, message, requested=None, cap=None):
        super().__init__(message)
        self.requested = requested
        self.cap = cap


class UnsupportedComparisonError(IvpError):
    """Two infinite tail rules cannot be compared by the rule table.

    Deciding containment between default rules requires reasoning about
    all but finitely many primes at once; pairs outside the supported
    table raise this error rather than guessing.
    """
