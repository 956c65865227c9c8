"""Exception types shared across the toolkit."""


class ImfkitError(Exception):
    """Base class for all toolkit errors."""


class SignalTooShort(ImfkitError):
    pass


class FilterTooLong(ImfkitError):
    pass


class TooFewExtrema(ImfkitError):
    pass


class ZeroReference(ImfkitError):
    pass


class NoSteadyState(ImfkitError):
    pass


class InvalidCoefficients(ImfkitError):
    pass


class GridTooSmall(ImfkitError):
    pass


class DegenerateSegment(ImfkitError):
    pass


class ZeroNoise(ImfkitError):
    pass


class UnknownExample(ImfkitError):
    pass


class ParseError(ImfkitError):
    def __init__(self, row, reason):
        self.row = row
        self.reason = reason
        super().__init__(f"row {row}: {reason}")


class NonUniformSpacing(ImfkitError):
    pass


class IoError(ImfkitError):
    pass
