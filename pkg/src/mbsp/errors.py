"""Exception hierarchy for the mbsp package.

Every error raised on purpose by this package derives from MbspError, so
callers can catch one base class. InputError covers malformed user data,
ParameterError covers invalid hyperparameter or option values, and
NumericError covers numerical failures encountered while sampling.
"""


class MbspError(Exception):
    """Base class for all package errors."""


class InputError(MbspError):
    """Raised when user-supplied data is malformed or inconsistent."""


class ParameterError(MbspError):
    """Raised when a hyperparameter or option value is out of range."""


class NumericError(MbspError):
    """Raised when a numerical routine fails beyond recovery.

    When raised from inside a chain run, the message names the sweep
    index at which the failure occurred.
    """

    def __init__(self, message, iteration=None):
        if iteration is not None:
            message = f"{message} (at sweep {iteration})"
        super().__init__(message)
        self.iteration = iteration


class ChainFormatError(InputError):
    """Raised when a persisted chain file is corrupt or truncated."""
