"""Exception types raised across the package."""


class RocScaleError(Exception):
    """Base class for all package errors."""


class DataError(RocScaleError):
    """Problem with the input data or a model file (CLI exit code 3)."""


class NumericError(RocScaleError):
    """Numerical failure during fitting (CLI exit code 4)."""


class ParseError(DataError):
    pass


class LabelError(DataError):
    pass


class SingleClassError(DataError):
    pass


class EmptyClassError(SingleClassError):
    pass


class DegenerateError(DataError):
    pass


class TooFewSamplesError(DataError):
    pass


class DimensionError(DataError):
    pass


class CapExceededError(DataError):
    pass


class InvalidRankError(DataError):
    pass


class FormatError(DataError):
    pass


class NoBracketError(NumericError):
    pass


class NonFiniteError(NumericError):
    pass


class EigError(NumericError):
    pass
