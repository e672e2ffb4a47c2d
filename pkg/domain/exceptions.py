from typing import Optional


class ThetaForgeError(Exception):
    """Base exception for q-series, lattice and corpus errors."""
    pass

class TruncationWindowError(ThetaForgeError):
    """Raised when a monomial does not fit below the truncation order."""
    pass

class NotInvertibleError(ThetaForgeError):
    """Raised when a series has no unit leading coefficient."""
    pass

class MisalignedSeriesError(ThetaForgeError):
    """Raised when an exponent is not divisible by the extraction power."""
    pass

class InsufficientPrecisionError(ThetaForgeError):
    """Raised when a comparison reaches past the known coefficients."""
    pass

class DivergentThetaError(ThetaForgeError):
    """Raised when a theta sum or lattice sum does not converge."""
    pass

class ExpressionSyntaxError(ThetaForgeError):
    """Raised when expression text cannot be tokenized or parsed."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position

class ArityError(ExpressionSyntaxError):
    """Raised when a known function is called with the wrong argument count."""
    pass

class SingularMatrixError(ThetaForgeError):
    """Raised when a covering matrix has determinant zero."""
    pass

class NotExactCoverError(ThetaForgeError):
    """Raised when coset representatives do not form an exact cover."""
    pass

class NotDiagonalizedError(ThetaForgeError):
    """Raised when a substitution leaves cross terms in the form."""
    pass

class NotPositiveDefiniteError(DivergentThetaError):
    """Raised when a quadratic form is not positive definite."""
    pass

class PreconditionError(ThetaForgeError):
    """Raised when a named precondition of an expansion fails."""
    pass

class ExpansionMismatchError(ThetaForgeError):
    """Raised when an expansion disagrees numerically with its lattice sum."""
    pass

class FormatError(ThetaForgeError):
    """Raised when matrix, form, shift or record text is malformed."""
    pass

class RecordNotFoundError(ThetaForgeError):
    """Raised when a corpus record id is unknown."""
    pass

class CorpusVerificationError(ThetaForgeError):
    """Raised when evaluating a corpus record fails."""

    def __init__(self, record_id: str, stage: str, cause: Optional[Exception] = None):
        detail = f": {cause}" if cause is not None else ""
        super().__init__(f"record {record_id} failed at {stage}{detail}")
        self.record_id = record_id
        self.stage = stage
        self.cause = cause
