from fastapi import HTTPException
from typing import Any, Dict, Optional


class MatrixAnalyticError(HTTPException):
    def __init__(self, status_code: int, detail: str, headers: Optional[Dict[str, Any]] = None):
        super().__init__(status_code=status_code, detail=detail, headers=headers)

    def __str__(self) -> str:
        return str(self.detail)


class DimensionMismatchError(MatrixAnalyticError):
    def __init__(self, expected: int, got: int, what: str = "variate dimension"):
        super().__init__(422, f"Dimension mismatch in {what}: expected {expected}, got {got}")


class ZeroPolynomialError(MatrixAnalyticError):
    def __init__(self):
        super().__init__(422, "Zero polynomial has no leading part")


class ZeroDivisorError(MatrixAnalyticError):
    def __init__(self):
        super().__init__(422, "Division by the zero polynomial")


class SingularEvaluationError(MatrixAnalyticError):
    def __init__(self, message: str = "Denominator vanishes at the evaluation point"):
        super().__init__(422, message)


class NotInvertibleAtOriginError(MatrixAnalyticError):
    def __init__(self):
        super().__init__(422, "Realization is not invertible at origin (d = 0)")


class ZeroRealizationError(MatrixAnalyticError):
    def __init__(self):
        super().__init__(422, "Zero realization: closing column b is zero")


class ClosingColumnError(MatrixAnalyticError):
    def __init__(self):
        super().__init__(422, "Closing column must be the all-ones vector; normalize it first")


class InvalidTransformError(MatrixAnalyticError):
    def __init__(self, message: str):
        super().__init__(422, f"Invalid rational transform: {message}")


class InvalidRepresentationError(MatrixAnalyticError):
    def __init__(self, message: str):
        super().__init__(422, f"Invalid representation: {message}")


class SubsetGuardError(MatrixAnalyticError):
    def __init__(self, m: int, guard: int):
        super().__init__(422, f"Subset expansion needs 2^{m} terms; state count {m} exceeds guard {guard}")


class NonRationalInputError(MatrixAnalyticError):
    def __init__(self, value: Any):
        super().__init__(422, f"Entry {value!r} has no exact rational rendering")


class InvalidDirectionError(MatrixAnalyticError):
    def __init__(self, message: str = "Direction must be non-negative and non-zero"):
        super().__init__(422, message)


class FormDegreeError(MatrixAnalyticError):
    def __init__(self, message: str):
        super().__init__(422, f"Unsupported form: {message}")


class InvalidSampleCountError(MatrixAnalyticError):
    def __init__(self, samples: int):
        super().__init__(422, f"Sample count must be at least 1, got {samples}")


class InputParseError(MatrixAnalyticError):
    def __init__(self, message: str):
        super().__init__(400, f"Malformed input: {message}")
