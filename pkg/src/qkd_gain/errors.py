"""Exception hierarchy for the qkd_gain package.

Exceptions:
    QKDGainError: Base exception for every error raised by the package
    InvalidParameterError: A numerical parameter is outside its domain
    DegenerateSourceError: A triggered source never fires (p_s = 0)
    UndefinedFractionError: R1 requested with p_exp = 0
    BracketError: A root/cutoff bracket does not straddle its target
    UnsupportedSourceError: No characterization registered for a source kind
    ScenarioConfigError: A scenario file is missing, malformed or has bad keys
"""

__all__ = [
    'QKDGainError',
    'InvalidParameterError',
    'DegenerateSourceError',
    'UndefinedFractionError',
    'BracketError',
    'UnsupportedSourceError',
    'ScenarioConfigError',
]


class QKDGainError(Exception):
    """Base exception for qkd_gain errors."""

    pass


class InvalidParameterError(QKDGainError, ValueError):
    """Raised when a parameter is negative, non-finite or out of range."""

    pass


class DegenerateSourceError(QKDGainError):
    """Raised when a triggered source has zero trigger probability.

    Callers evaluating the gain treat this as zero secure bits.
    """

    pass


class UndefinedFractionError(QKDGainError, ZeroDivisionError):
    """Raised when R1 is requested for a link with no detections."""

    pass


class BracketError(QKDGainError):
    """Raised when a search bracket does not straddle its target."""

    pass


class UnsupportedSourceError(QKDGainError):
    """Raised when no source model is registered for the requested kind."""

    pass


class ScenarioConfigError(QKDGainError):
    """Raised when a scenario file has missing, unknown or invalid keys.

    Attributes:
        key: Dotted name of the offending key (e.g. ``receiver.efficiency``),
             or None when the problem is not tied to a single key.
    """

    def __init__(self, message: str, key: str | None = None) -> None:
        super().__init__(message)
        self.key = key
