"""Exception types raised by qstnoise."""


class QstError(Exception):
    """Base class for all package errors."""


class DegenerateParameters(QstError, ValueError):
    """Cholesky parameters at (or numerically at) the origin."""


class InvalidMean(QstError, ValueError):
    """Poisson mean that is negative, NaN or infinite."""


class NoValidResult(QstError, RuntimeError):
    """Every estimator restart ended on the degeneracy penalty."""


class ParseError(QstError, ValueError):
    """Malformed or invalid scenario configuration text."""

    def __init__(self, line, key, reason):
        self.line = line
        self.key = key
        self.reason = reason
        where = f"line {line}" if line is not None else "config"
        super().__init__(f"{where}: {key}: {reason}" if key else f"{where}: {reason}")
