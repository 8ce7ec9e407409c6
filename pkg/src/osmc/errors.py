"""Exception types raised across the package."""


class OSMCError(Exception):
    """Base class for all package errors."""


# -- instance / embedding problems ------------------------------------------

class InstanceError(OSMCError):
    """An input graph or instance violates a structural requirement."""


class InconsistentRotation(InstanceError):
    pass


class NotSimple(InstanceError):
    pass


class Disconnected(InstanceError):
    pass


class NonPlanarRotation(InstanceError):
    pass


class SNotFullFace(InstanceError):
    pass


class TooFewSources(InstanceError):
    pass


class BadTerminal(InstanceError):
    pass


class OsgFormatError(InstanceError):
    pass


# -- algorithmic invariant breaches -----------------------------------------

class InvariantViolation(OSMCError):
    """A structural property that must hold for planar instances failed."""


class DisconnectedCutSide(InvariantViolation):
    pass


class NotASimpleCycle(InvariantViolation):
    pass


class AdjacentPatternViolation(InvariantViolation):
    pass


class FingerprintCollisionDetected(OSMCError):
    pass


# -- usage errors ------------------------------------------------------------

class ModeMismatch(OSMCError, ValueError):
    pass


class ModePreconditionFailed(OSMCError, ValueError):
    pass


class UnknownTerminal(OSMCError, KeyError):
    pass


class IndexOutOfRange(OSMCError, IndexError):
    pass


class CorruptEncoding(OSMCError):
    pass


class BudgetExceeded(OSMCError):
    pass


class OddK(OSMCError, ValueError):
    pass
