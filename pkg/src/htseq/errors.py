"""Exception hierarchy shared by all modules."""


class HTSError(Exception):
    """Base class; ``stage`` names the pipeline stage that failed."""

    stage = "internal"

    def to_json(self):
        return {"error": type(self).__name__, "stage": self.stage, "message": str(self)}


class CapacityError(HTSError):
    stage = "arithmetic"


class PoleError(HTSError):
    stage = "arithmetic"


class ParseError(HTSError):
    stage = "parse"

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class DomainError(HTSError):
    stage = "parse"


class UndefinedValueError(HTSError):
    stage = "evaluate"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NonCyclotomicError(HTSError):
    stage = "evaluate"


class UnsupportedStructureError(HTSError):
    stage = "monomials"


class ZeroModulusError(HTSError):
    stage = "indicator"


class DegenerateSectionError(HTSError):
    stage = "section"


class OutOfDomainError(HTSError):
    stage = "evaluate"


class InsufficientValuesError(HTSError):
    stage = "initial-values"

    def __init__(self, message, needed=()):
        super().__init__(message)
        self.needed = tuple(needed)


class RankDeficiencyError(HTSError):
    stage = "ansatz"


class MalformedInputError(HTSError):
    stage = "input"
