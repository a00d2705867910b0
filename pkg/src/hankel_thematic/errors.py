"""Exception hierarchy.

Every numeric failure derives from :class:`NumericError`; the CLI maps these
onto exit codes (parse 1, numeric 2, ambiguity 3).
"""

from __future__ import annotations


class ThematicError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ThematicError, ValueError):
    """A symbol or bundle file does not follow the documented schema."""


class NumericError(ThematicError):
    pass


class ShapeMismatch(NumericError, ValueError):
    pass


class NonUnitArgument(NumericError, ValueError):
    pass


class DenominatorNearZero(NumericError):
    pass


class GridTooCoarse(NumericError):
    pass


class UnsupportedRepresentation(NumericError, TypeError):
    pass


class NotBoundedAwayFromZero(NumericError):
    pass


class NonIntegerWinding(NumericError):
    pass


class NotUnimodular(NumericError):
    pass


class NotAnalytic(NumericError):
    pass


class NotNonincreasing(NumericError, ValueError):
    pass


class InvariantViolation(NumericError):
    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


class DegenerateInput(NumericError):
    pass


class NotEquivalent(NumericError):
    """No constant unitary pair aligns the two residuals."""

    def __init__(self, deviation: float, message: str | None = None):
        self.deviation = deviation
        super().__init__(message or f"residuals not equivalent (deviation {deviation:.3e})")


class InconsistentTable(NumericError):
    pass


class AmbiguousSpectrum(NumericError):
    """A singular value sits inside the guard annulus below the level."""


class ZeroHankelWarning(UserWarning):
    pass


class TruncationWarning(UserWarning):
    pass
