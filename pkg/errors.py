#!/usr/bin/env python3
"""
Error types for currentlab
Every failure carries the CLI exit code it maps to
"""

from typing import Any, Dict


class CurrentLabError(Exception):
    """Base class for all currentlab failures"""

    exit_code = 2

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_report(self) -> Dict[str, Any]:
        """Structured error report for the CLI"""
        report = {"ok": False, "error": type(self).__name__, "message": self.message}
        if self.details:
            report["details"] = {key: str(value) for key, value in self.details.items()}
        return report


class ValidationError(CurrentLabError):
    """Malformed input: bad angles, bad chords, broken taxi cycles, bad box ordering"""


class InputFileError(CurrentLabError):
    """Unreadable or undecodable input file"""


class GenericPositionError(CurrentLabError):
    """An evaluation point coincides with a chord endpoint"""


class EmptyCurrentError(CurrentLabError):
    pass


class MassRangeError(CurrentLabError):
    """Mass level outside [0, |mu|]"""


class NotLowerSubmeasureError(CurrentLabError):
    pass


class ContractError(CurrentLabError):
    """A precondition between arguments does not hold"""


class NotLaminationError(CurrentLabError):
    pass


class FixedPointError(CurrentLabError):
    """Orbit sums at a fixed point of the periodic model are not finite"""


class NotHyperbolicError(CurrentLabError):
    pass


class DiagonalError(CurrentLabError):
    pass


class RoundingCollisionError(CurrentLabError):
    pass


class DegenerateConfigurationError(CurrentLabError):
    pass


class ComplexityBudgetError(CurrentLabError):
    """Support larger than the enumeration budget"""

    exit_code = 4
