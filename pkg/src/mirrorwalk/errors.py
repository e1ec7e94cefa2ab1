"""Exception hierarchy shared by every module."""


class MirrorWalkError(Exception):
    """Base class for all package errors."""


class InvalidInputError(MirrorWalkError, ValueError):
    """Arguments violate a documented precondition."""


class PreconditionError(InvalidInputError):
    """An operation was applied to a value outside its domain (e.g. no crossing)."""


class CostGuardError(MirrorWalkError):
    """Refused because the request would be too expensive (exhaustive enumeration, DP size)."""


class NoSurvivorError(MirrorWalkError):
    """No toss sequence (or no sampled trial) survives the path constraint."""


class DegenerateLimitError(MirrorWalkError):
    """Limit probability has a vanishing normaliser."""


class DomainError(MirrorWalkError, ValueError):
    """An inequality is evaluated outside the range where it is meaningful."""


class DegenerateDomainError(MirrorWalkError):
    """The lattice domain is too narrow for the requested sampler."""
