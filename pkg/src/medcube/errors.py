"""Exception hierarchy.

Checks that can legitimately come out negative (axiom verification,
Sholander properties, local cubulation, metric verification) return
reports instead of raising.
"""


class MedcubeError(Exception):
    """Base class for all errors raised by medcube."""


class UnknownVertex(MedcubeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownWall(MedcubeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InvalidModel(MedcubeError, ValueError):
    pass


class NotMedianClosed(InvalidModel):
    """The vertex set misses the majority of some triple."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalInvariantViolation(MedcubeError, RuntimeError):
    pass


class NotASquare(MedcubeError, ValueError):
    pass


class PrerequisiteSquareMissing(MedcubeError, ValueError):
    pass


class EmbeddingCheckFailed(MedcubeError, RuntimeError):
    pass


class PreconditionViolated(MedcubeError, ValueError):
    pass


class NotRealized(MedcubeError, ValueError):
    pass


class NotConvex(MedcubeError, ValueError):
    pass


class AmbientExhausted(MedcubeError, RuntimeError):
    def __init__(self, message, largest):
        super().__init__(message)
        self.largest = largest


class GateNotUnique(MedcubeError, RuntimeError):
    pass


class InvalidCount(MedcubeError, ValueError):
    pass


class TooLarge(MedcubeError, ValueError):
    pass


class NotATree(MedcubeError, ValueError):
    pass


class ParseError(MedcubeError, ValueError):
    def __init__(self, message, line, column=None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column
