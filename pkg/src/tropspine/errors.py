"""Exception hierarchy. Every error raised by the library derives from
:class:`TropSpineError`, which is a ``ValueError`` so callers validating
input can catch either."""


class TropSpineError(ValueError):
    pass


class EmptyDegree(TropSpineError):
    pass


class SumNotZero(TropSpineError):
    pass


class DimensionMismatch(TropSpineError):
    pass


class DegenerateDegree(TropSpineError):
    pass


class ZeroCoefficient(TropSpineError):
    pass


class InconsistentDegree(TropSpineError):
    pass


class PointNotOnLine(TropSpineError):
    pass


class AtPuncture(TropSpineError):
    pass


class DegreeMismatch(TropSpineError):
    pass


class BadScheme(TropSpineError):
    pass


class ZeroCoordinate(TropSpineError):
    pass


class EmptyCloud(TropSpineError):
    pass


class LeafCountMismatch(TropSpineError):
    pass


class EmptySubset(TropSpineError):
    pass


class TooLarge(TropSpineError):
    pass


class InconsistentDatum(TropSpineError):
    pass


class TypeUnstable(TropSpineError):
    pass


class InsufficientSamples(TropSpineError):
    pass


class SchemaViolation(TropSpineError):
    """Raised by deserializers; ``pointer`` is a JSON pointer to the offending node."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
