"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`GarlandError`,
so callers (and the CLI) can separate input problems from bugs.
"""


class GarlandError(Exception):
    """Base class for all library errors."""


class InputError(GarlandError, ValueError):
    """Malformed or out-of-range input."""


class EmptyInput(InputError):
    pass


class MixedDimension(InputError):
    pass


class DuplicateVertexInSimplex(InputError):
    pass


class NotASimplex(InputError):
    pass


class DimensionError(InputError):
    """Operation undefined in the requested dimension or degree."""


class GroupTooLarge(InputError):
    pass


class NotAnAutomorphism(InputError):
    pass


class EmptyGraph(InputError):
    pass


class Disconnected(InputError):
    pass


class DisconnectedLink(Disconnected):
    def __init__(self, simplex, message=None):
        self.simplex = tuple(simplex)
        super().__init__(message or f"link of {self.simplex} has a disconnected 1-skeleton")


class EigensolveFailure(GarlandError, ArithmeticError):
    pass


class OutOfRange(InputError):
    pass


class UnreachableThreshold(GarlandError):
    pass


class OneSidedInapplicable(GarlandError):
    pass


class DegenerateSubspace(GarlandError):
    pass


class InvalidRepresentation(InputError):
    pass


class DegreeMismatch(InputError):
    pass


class InconsistentInputs(InputError):
    pass


class TooManyRelators(InputError):
    pass


class ParameterOutOfRange(OutOfRange):
    pass


class DimensionZero(DimensionError):
    pass


class TopDegree(DimensionError):
    pass


class UnsupportedDegree(DimensionError):
    pass


class DegreeOutOfRange(DimensionError):
    pass


class NotInComplex(NotASimplex):
    pass
