"""Exception types mapped to CLI exit codes."""


class FairselError(Exception):
    """Base class for package errors."""


class ConfigError(FairselError):
    """Bad configuration: unknown key, invalid value, missing file."""


class DataError(FairselError):
    """Bad data: missing column, non-binary target, degenerate split."""


class NumericalError(FairselError):
    """Runtime numerical failure: non-finite loss, gradient, or parameter."""
