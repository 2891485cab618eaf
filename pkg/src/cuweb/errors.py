"""Exception hierarchy.

Every validation error carries the offending tuple in ``.witness`` so callers
(and the CLI) can report exactly where a structure broke.
"""
from __future__ import annotations


class CuwebError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str = "", witness: tuple | None = None):
        super().__init__(message)
        self.witness = witness


# order-core
class NonAssociative(CuwebError):
    pass


class NonCommutative(CuwebError):
    pass


class BadNeutral(CuwebError):
    pass


class NotPartialOrder(CuwebError):
    pass


class IncompatibleSumOrder(CuwebError):
    pass


class NotPositivelyOrdered(CuwebError):
    pass


class InfeasibleEnumeration(CuwebError):
    pass


# abgroups
class NotWellDefined(CuwebError):
    pass


class DomainMismatch(CuwebError):
    pass


class Unbounded(CuwebError):
    pass


class NotComposable(CuwebError):
    pass


# systems
class MissingEdge(CuwebError):
    pass


class NotIdentityOnDiagonal(CuwebError):
    pass


class FunctorialityFailure(CuwebError):
    pass


class NontrivialFiberAtZero(CuwebError):
    pass


class NotMonoidMorphism(CuwebError):
    pass


class NotOrderPreserving(CuwebError):
    pass


class NaturalitySquareFailure(CuwebError):
    pass


# webbing
class FiberNotEnumerable(CuwebError):
    pass


class TheoremViolation(CuwebError):
    """A property that must hold by construction failed: an implementation bug."""


# structure
class NotPositive(CuwebError):
    pass


class NotAnIdeal(CuwebError):
    pass


class NoMaximalElements(CuwebError):
    pass


class IdealNotKilled(CuwebError):
    pass


class NotSinglyGenerated(CuwebError):
    pass


# colimits
class NotDirected(CuwebError):
    pass


class IncoherentArrows(CuwebError):
    pass


class NotACocone(CuwebError):
    pass


# circle / metric
class ResolutionTooLarge(CuwebError):
    pass


class ResolutionMismatch(CuwebError):
    pass


class CoarserResolution(CuwebError):
    pass


class OffGridRadius(CuwebError):
    pass


class ResolutionUnavailable(CuwebError):
    pass


class NotWebbedMorphism(CuwebError):
    pass


# serialization / cli
class ParseError(CuwebError):
    pass


class SchemaError(CuwebError):
    pass
