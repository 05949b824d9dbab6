class OddSetError(ValueError):
    """Base class for every precondition failure raised by this package."""


class NotHalfIntegerError(OddSetError):
    pass


class SeparationError(OddSetError):
    pass


class NotOddDistanceError(OddSetError):
    pass


class DistanceToleranceError(OddSetError):
    pass


class InconsistentSystemError(OddSetError):
    pass


class DriftError(OddSetError):
    pass


class VertexLimitError(OddSetError):
    pass
