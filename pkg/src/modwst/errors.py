"""Exception hierarchy shared across the toolkit."""


class ModwstError(Exception):
    """Base class for all toolkit errors."""


class NotFoundError(ModwstError, KeyError):
    """A named resource (filter, process class, path) does not exist."""

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return Exception.__str__(self)


class InvalidFilterError(ModwstError, ValueError):
    """Filter taps violate a structural requirement (e.g. odd length)."""


class InvalidLengthError(ModwstError, ValueError):
    """Series length is unusable for the requested transform."""


class InvalidLevelError(ModwstError, ValueError):
    """Decomposition level out of range."""


class InvalidSizeError(ModwstError, ValueError):
    """Non-positive size parameter."""


class FilterTooLongError(ModwstError, ValueError):
    """Averaging filter does not fit inside the signal."""


class StratificationError(ModwstError, ValueError):
    """A class has too few members to split."""


class EmptyFeatureSetError(ModwstError, ValueError):
    """Preprocessing removed every column."""


class InvalidLabelsError(ModwstError, ValueError):
    """Label vector unusable for training (e.g. a single class)."""


class NumericalError(ModwstError, ArithmeticError):
    """A numerical routine failed to produce a usable result."""


class InvalidInputError(ModwstError, ValueError):
    """Mismatched or malformed in-memory inputs."""


class FormatError(ModwstError, ValueError):
    """A file violates the expected layout (ragged rows, bad width)."""


class ParseError(FormatError):
    """A cell could not be parsed; message carries row/column context."""
