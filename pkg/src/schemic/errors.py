"""Exception hierarchy shared by every layer of the engine."""


class SchemicError(Exception):
    """Base class for all engine errors."""


class RingMismatch(SchemicError):
    pass


class MissingAssignment(SchemicError):
    pass


class NotArtinian(SchemicError):
    pass


class NotLocal(SchemicError):
    pass


class ResidueNotGroundField(SchemicError):
    pass


class NotZeroDimensional(SchemicError):
    pass


class InseparableCase(SchemicError):
    pass


class PointNotOnScheme(SchemicError):
    pass


class FieldMismatch(SchemicError):
    pass


class NotEquidimensionalAssertionFailed(SchemicError):
    pass


class DimensionMismatch(SchemicError):
    pass


class BasisNotNested(SchemicError):
    pass


class ContainmentViolated(SchemicError):
    pass


class UncertifiedReduction(SchemicError):
    pass


class TraceNotStabilized(SchemicError):
    def __init__(self, level, message=None):
        self.level = level
        super().__init__(message or f"trace did not stabilize at level {level}")


class TailMismatch(SchemicError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"closed form disagrees with coefficient {index}")
