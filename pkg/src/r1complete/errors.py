"""Exception types shared across the package."""


class CompletionError(Exception):
    """Base class for errors raised by this package."""


class InputError(CompletionError, ValueError):
    """Invalid caller input: bad indices, malformed files, inconsistent shapes."""


class NotReconstructibleError(CompletionError):
    """The requested entry is not determined by the observation pattern."""
