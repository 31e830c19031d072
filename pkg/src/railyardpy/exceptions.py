"""Errors raised by railyardpy.

Each error derives from :class:`RailYardError` and from the builtin that
matches its meaning, so callers can catch either.

"""


class RailYardError(Exception):
    """Base class for railyardpy errors."""


class CellOutsideDiagram(RailYardError, ValueError):
    pass


class PoleEncountered(RailYardError, ZeroDivisionError):
    """A (q, t) dependent denominator vanished."""


class InsufficientVariables(RailYardError, ValueError):
    pass


class SeriesPoleAtZero(RailYardError, ZeroDivisionError):
    """A formal series would need a negative power of its variable."""


class LengthMismatch(RailYardError, ValueError):
    pass


class InvalidState(RailYardError, ValueError):
    pass


class ColumnOutOfRange(RailYardError, ValueError):
    pass


class DivergentTail(RailYardError, RuntimeError):
    pass


class TruncationTooCoarse(RailYardError, RuntimeError):
    pass


class UniverseTooLarge(RailYardError, RuntimeError):
    pass


class CapsTooTight(RailYardError, RuntimeError):
    pass


class ContourCrossesSingularity(RailYardError, ValueError):
    pass


class QuadratureNotConverged(RailYardError, RuntimeError):
    pass


class ContoursNotDisjoint(RailYardError, ValueError):
    pass


class PoleHit(RailYardError, ZeroDivisionError):
    pass


class NoConvergenceInK(RailYardError, RuntimeError):
    pass


class AlphaIrrationalUnsupportedExact(RailYardError, ValueError):
    """Exact polynomial clearing needs a rational Jack parameter."""


class NoSolutionOnBranch(RailYardError, RuntimeError):
    pass


class ExcludedRegion(RailYardError, ValueError):
    pass


class ConfigParseError(RailYardError, ValueError):
    pass
