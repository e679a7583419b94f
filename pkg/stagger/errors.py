"""Exception types and violation records shared by every stagger module."""

from dataclasses import dataclass
from typing import Optional


class StaggerError(RuntimeError):
    """Base class for every error raised by stagger."""


class InvalidConeError(StaggerError):
    pass


class MissingAssignmentError(StaggerError):
    pass


class NotInConeError(StaggerError):
    pass


class NoIntegralLiftError(StaggerError):
    pass


class PreconditionError(StaggerError):
    pass


class NonGorensteinError(StaggerError):
    pass


class UnboundedComponentError(StaggerError):
    pass


class UnknownFanError(StaggerError):
    pass


class InconsistentWitnessError(StaggerError):
    pass


class ParseError(StaggerError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = "line {}: {}".format(line_number, message)
        super().__init__(message)
        self.line_number = line_number


class UnresolvedReferenceError(ParseError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    cone: Optional[int]
    message: str

    def __str__(self):
        if self.cone is None:
            return "{}: {}".format(self.kind, self.message)
        return "{} at cone {}: {}".format(self.kind, self.cone, self.message)
