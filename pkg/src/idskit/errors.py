"""Exception taxonomy mapped onto CLI exit codes."""


class IdsError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class UsageError(IdsError):
    """Bad flags or flag combinations (exit code 1)."""

    exit_code = 1


class DataError(IdsError):
    """Unreadable, malformed, or infeasible input data (exit code 2)."""

    exit_code = 2


class ModelError(IdsError):
    """Bad model files or model/data schema mismatches (exit code 3)."""

    exit_code = 3
