from typing import Any, Dict, Optional


class CoverbordError(Exception):
    """Base error carrying a process exit code and structured detail"""
    exit_code = 1

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}

    def to_report(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "detail": self.detail,
        }


# Input / parsing
class ParseError(CoverbordError):
    exit_code = 2


class ValidationError(CoverbordError):
    exit_code = 3


# Complex structure
class ComplexError(ValidationError):
    exit_code = 4


class MixedDimension(ComplexError):
    pass


class DuplicateFacet(ComplexError):
    pass


class DegenerateFacet(ComplexError):
    pass


class NotPseudomanifold(ComplexError):
    pass


class NotStronglyConnected(ComplexError):
    pass


class NonOrientable(ComplexError):
    pass


class HasBoundary(ComplexError):
    pass


class EmptyBoundary(ComplexError):
    pass


class NotClosed(ComplexError):
    pass


class SizeLimit(ComplexError):
    pass


class DimensionMismatch(ComplexError):
    pass


class NoRealization(ComplexError):
    pass


# Covers and maps
class CoverError(ValidationError):
    exit_code = 5


class LabelOutOfRange(CoverError):
    pass


class NotSubordinate(CoverError):
    pass


class MissingVertex(CoverError):
    pass


class ImageNotInBoundary(CoverError):
    pass


class CoveringSimplexInInput(CoverError):
    pass


class NotSperner(CoverError):
    pass


# Genericity of exact geometric choices
class GenericityError(CoverbordError):
    exit_code = 6


class GenericityExhausted(GenericityError):
    pass


class PoleOnCurve(GenericityError):
    pass


class CurvesIntersect(GenericityError):
    pass


class BudgetExceeded(CoverbordError):
    exit_code = 7


class RecheckFailed(CoverbordError):
    exit_code = 8


class UnknownCommand(CoverbordError):
    exit_code = 64


__all__ = [
    "CoverbordError",
    "ParseError",
    "ValidationError",
    "ComplexError",
    "MixedDimension",
    "DuplicateFacet",
    "DegenerateFacet",
    "NotPseudomanifold",
    "NotStronglyConnected",
    "NonOrientable",
    "HasBoundary",
    "EmptyBoundary",
    "NotClosed",
    "SizeLimit",
    "DimensionMismatch",
    "NoRealization",
    "CoverError",
    "LabelOutOfRange",
    "NotSubordinate",
    "MissingVertex",
    "ImageNotInBoundary",
    "CoveringSimplexInInput",
    "NotSperner",
    "GenericityError",
    "GenericityExhausted",
    "PoleOnCurve",
    "CurvesIntersect",
    "BudgetExceeded",
    "RecheckFailed",
    "UnknownCommand",
]
