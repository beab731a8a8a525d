"""Exception hierarchy for the wacode package."""


class WacodeError(Exception):
    """Base class for all wacode errors."""


class UsageError(WacodeError):
    """Invalid parameters or parameter combinations (CLI exit code 2)."""


class FormatError(WacodeError):
    """Malformed or non-canonical container/header bytes (CLI exit code 3)."""


class DataError(WacodeError):
    """Corrupt payload: truncation or encoder/decoder model desynchronization."""
