"""Exception hierarchy shared by all modules."""


class SamplerError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(SamplerError, ValueError):
    """Arguments violate an operation's preconditions."""


class DegenerateNetworkError(SamplerError):
    """Network has too few top nodes to perform a trade."""


class InfeasibleMarginsError(SamplerError, ValueError):
    """No binary matrix realizes the requested degree sequences."""


class NonConvergenceError(SamplerError):
    """The stopping rule hit ``max_trades`` before the distance distribution stabilized.

    ``trace`` holds the (t, KsResult) pairs computed before giving up.
    """

    def __init__(self, message, trace=None, trades_performed=0):
        super().__init__(message)
        self.trace = list(trace or [])
        self.trades_performed = trades_performed


class UniverseTooLargeError(SamplerError):
    """Enumeration found more members than the cap allows."""

    def __init__(self, message, partial_count):
        super().__init__(message)
        self.partial_count = partial_count


class ParseError(SamplerError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DatasetNotFoundError(SamplerError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""
