"""Exception types shared across the package.

The CLI maps these onto exit codes: usage/configuration problems exit
with 1, data problems (unreadable input, failed computation) with 2.
"""


class AdoptRankError(Exception):
    """Base class for all package-specific errors."""


class ParseError(AdoptRankError):
    """Malformed input file content.

    Carries the 1-based line number of the offending line when known.
    """

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class DataError(AdoptRankError):
    """Input data that parses but cannot be used (empty graph, missing columns)."""


class ConfigError(AdoptRankError):
    """Invalid run configuration; ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field


class ConvergenceError(AdoptRankError):
    """Iterative solver did not reach tolerance; carries the last residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
