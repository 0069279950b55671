# -*- coding: utf-8 -*-
"""Exception hierarchy shared by the library and the command line."""
# License: BSD 2 clause


class VibestepError(ValueError):
    """Base class of all errors raised by ``vibestep``."""

    exit_code = 1


class ConfigError(VibestepError):
    """Invalid configuration or parameter combination."""

    exit_code = 2


class DataError(VibestepError):
    """Invalid, missing or inconsistent input data.

    Parameters
    ----------
    message : str
        Human readable description.
    path : str, optional
        The offending file, if any.
    row : int, optional
        The offending 1-based row of ``path`` (header is row 1).
    """

    exit_code = 3

    def __init__(self, message, path=None, row=None):
        super(DataError, self).__init__(message)
        self.path = None if path is None else str(path)
        self.row = row


class MissingFileError(DataError):
    """A referenced file does not exist."""


class MalformedFileError(DataError):
    """A file cannot be parsed."""


class NonFiniteSampleError(DataError):
    """A file contains NaN or infinite values."""


class DimensionMismatchError(DataError):
    """Feature vectors of different dimensions were mixed."""


class EmptyDataError(DataError):
    """Nothing to work on, e.g. no footstep was detected."""


class NumericalError(VibestepError):
    """A numerical procedure failed (singular or non-SPD matrices)."""

    exit_code = 4


class StaleDecisionError(VibestepError):
    """A decision was applied to a model state it was not computed on."""

    exit_code = 4
