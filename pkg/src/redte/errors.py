"""Exception types shared across the package."""


class RedteError(Exception):
    """Base class for all errors raised by this package."""


class NonFiniteError(RedteError):
    """A panel value is NaN or infinite."""

    def __init__(self, channel, sample):
        self.channel = channel
        self.sample = sample
        super().__init__(f"non-finite value in channel {channel!r} at sample {sample}")


class DuplicateLabelError(RedteError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"duplicate channel label {label!r}")


class LengthMismatchError(RedteError):
    """Channels do not all share the same number of samples."""


class ConstantChannelError(RedteError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"channel {label!r} has (near-)zero variance")


class InvalidPmfError(RedteError):
    """Probabilities are negative, do not sum to one, or outcomes repeat."""


class UnstableError(RedteError):
    """The linear system violates its stationarity condition."""


class RegionUndefinedError(RedteError):
    """The closed-form case split is undefined for these parameters."""


class SingularCovarianceError(RedteError):
    """A covariance block is singular or not positive definite."""


class TooShortError(RedteError):
    """Time series too short for the requested embedding."""


class DegenerateGeometryError(RedteError):
    """Too many tied points for neighbor statistics to be meaningful."""


class SameProcessError(RedteError):
    """Source and target refer to the same process."""


class DomainError(RedteError):
    """Argument outside a function's mathematical domain."""


class ParseError(RedteError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{message}{loc}")
