"""Exceptions raised by the sldiff library.

The command line front end maps these onto exit codes (see pipeline.main).
"""


class SldiffError(Exception):
    """Base class for all sldiff errors."""


class ConfigError(SldiffError):
    """Invalid experiment configuration, parameter grid or option value."""


class DataError(SldiffError):
    """Unreadable, malformed or empty interaction data."""


class ColdStartError(DataError):
    """The requested user has no training edges and cannot be scored."""

    def __init__(self, user):
        super().__init__(user)
        self.user = user

    def __str__(self):
        return "user %s has no training edges (cold start)" % (self.user,)


class DiffusionError(SldiffError, ValueError):
    """A resource vector that cannot be propagated (wrong length, NaN, negative)."""
