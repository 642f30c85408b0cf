"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SurfdissError(Exception):
    """Base class for every error raised by this package."""


class DegenerateSurface(SurfdissError):
    """The surface is excluded (rank below one or a listed small case)."""


class NoBoundary(SurfdissError):
    """The surface has no boundary component."""


class FoldedClosureViolated(SurfdissError):
    """A loop enclosing a puncture appears without its folded side."""


class NullHomotopic(SurfdissError):
    """The described curve is contractible."""


class BoundaryParallel(SurfdissError):
    """The described curve is homotopic to a boundary segment."""


class SelfIntersecting(SurfdissError):
    """The described curve crosses itself in the interior."""


class IllegalMonogonCutout(SurfdissError):
    """The curve is a loop cutting out a once-punctured monogon."""


class DegenerateAfterCut(SurfdissError):
    """Cutting leaves no arc to work with."""


class IncompatibleArc(SurfdissError):
    """The arc intersects the arc being cut along."""


class DoesNotShear(SurfdissError):
    """The laminate does not shear the partial triangulation."""


class NotStandard(SurfdissError):
    """The arc is not standard (or co-standard) for the context."""


class InternalInconsistency(SurfdissError):
    """A combinatorial identity guaranteed by theory failed."""


class CrossCheckMismatch(InternalInconsistency):
    """Two independent constructions of the same object disagree."""


class LimitExceeded(SurfdissError):
    """A configured resource limit was reached; carries partial data."""

    def __init__(self, message: str, partial: object = None) -> None:
        super().__init__(message)
        self.partial = partial


class NotAdmissible(SurfdissError):
    """Some puncture is not enclosed by a self-folded triangle."""


class AxiomViolation(SurfdissError):
    """A skew-gentle axiom fails; carries the violated clause."""

    def __init__(self, clause: str, detail: str = "") -> None:
        super().__init__(f"{clause}: {detail}" if detail else clause)
        self.clause = clause


class ConfigError(SurfdissError):
    """A job configuration could not be parsed or validated."""


class InvalidArc(SurfdissError):
    """An arc description does not trace a curve on the surface."""
