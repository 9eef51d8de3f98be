"""Exception types shared across the package."""


class AriabenchError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParamsError(AriabenchError, ValueError):
    """An activation or optimizer parameter violates its domain constraints."""


class UnsupportedActivationError(AriabenchError, ValueError):
    """Requested a conversion or feature the activation kind does not support."""


class ShapeMismatchError(AriabenchError, ValueError):
    """Tensor or layer shapes do not chain/agree."""


class LabelOutOfRangeError(AriabenchError, ValueError):
    """A class label lies outside [0, classes)."""


class InvalidSizeError(AriabenchError, ValueError):
    """A requested sample count is outside the valid range."""


class DataFormatError(AriabenchError, ValueError):
    """Base class for malformed dataset files."""


class BadMagicError(DataFormatError):
    """File does not start with the expected IDX magic number."""


class TruncatedFileError(DataFormatError):
    """File ends before the payload announced in its header."""


class CountMismatchError(DataFormatError):
    """Image and label files disagree on the number of samples."""


class ConfigError(AriabenchError, ValueError):
    """A JSON config field is missing or invalid.

    ``path`` locates the offending field, e.g. ``train.optimizer.lr``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")
