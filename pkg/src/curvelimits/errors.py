"""Exception hierarchy shared by all modules.

The command line maps these onto exit codes: parse errors to 2, resource
caps to 3 and internal invariant failures to 4.
"""


class CurveLimitsError(Exception):
    """Base class for every error raised by the package."""


class ParseError(CurveLimitsError, ValueError):
    """Malformed curve, germ or field input."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class CapError(CurveLimitsError):
    """A configured resource cap was exceeded."""


class TowerLimitError(CapError):
    """Adjoining another generator would exceed the tower height limit."""


class DegreeCapError(CapError):
    """A polynomial is too large for the configured degree caps."""


class PrecisionCapError(CapError):
    """A series expansion did not finish within the configured order cap."""


class TowerMismatchError(CurveLimitsError, ValueError):
    """Two values live in towers where neither extends the other."""


class GeometryError(CurveLimitsError, ValueError):
    """A geometric precondition (point on curve, line in cone, ...) fails."""


class InvariantError(CurveLimitsError, RuntimeError):
    """An internal consistency check failed."""
