"""Exception taxonomy shared by the library and the command line tool.

Exit-code mapping used by the CLI: InputError -> 1, FormatError -> 2,
InternalError -> 3.
"""


class GcsaError(Exception):
    """Base class for all errors raised by this package."""


class InputError(GcsaError):
    """Invalid user input: bad alignment, bad pattern, bad parameters."""


class FormatError(GcsaError):
    """Malformed serialized data: wrong magic, version, or truncation."""


class InternalError(GcsaError):
    """An internal invariant was violated; indicates a bug."""
