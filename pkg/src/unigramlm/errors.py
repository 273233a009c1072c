"""Exception types shared across the package.

The CLI maps these onto exit codes: usage errors exit 1, data errors
exit 2, numeric/degenerate-model errors exit 3.
"""


class UnigramLMError(Exception):
    """Base class for all package errors."""


class UsageError(UnigramLMError):
    """Bad command-line arguments or option combinations."""


class DataError(UnigramLMError):
    """Invalid, empty, or malformed input data."""


class ModelFormatError(DataError):
    """Unreadable, truncated, or version-incompatible model file."""


class NumericError(UnigramLMError):
    """Numerically degenerate model or computation."""


class DegeneratePYPError(NumericError):
    """All seating weights vanish (for example a=0, b=0 with no open cluster)."""


class InfiniteCrossEntropyError(NumericError):
    """A test token received probability zero under the evaluated model."""
