"""Exception hierarchy shared by every module of the package."""


class FinslerLabError(Exception):
    """Base class for all package errors."""


class InvalidBody(FinslerLabError, ValueError):
    """Body is unbounded, degenerate, or does not contain the origin in its interior."""


class NotInterior(FinslerLabError, ValueError):
    pass


class DegenerateDirection(FinslerLabError, ValueError):
    pass


class MethodUnsupported(FinslerLabError, ValueError):
    pass


class SampleBudgetTooSmall(FinslerLabError, ValueError):
    pass


class RejectionStall(FinslerLabError, RuntimeError):
    pass


class NotConverged(FinslerLabError, RuntimeError):
    pass


class NonConvexDetected(FinslerLabError, RuntimeError):
    pass


class NoCommonInteriorPoint(FinslerLabError, ValueError):
    pass


class SingularDual(FinslerLabError, RuntimeError):
    pass


class DriftOutsideTarget(FinslerLabError, ValueError):
    pass


class PointOnBoundary(FinslerLabError, ValueError):
    """Query point lies on (within 1e-9 of) or outside the domain boundary."""


class PathExitsDomain(FinslerLabError, ValueError):
    pass


class DomainNotUnitBall(FinslerLabError, ValueError):
    pass
