"""Exception types raised across the package."""


class PadicError(Exception):
    """Base class for every error raised by wachlog."""


class InvalidUnitError(PadicError):
    pass


class PrecisionExhaustedError(PadicError):
    pass


class DomainError(PadicError):
    pass


class CompositionDomainError(DomainError):
    pass


class InexactDivisionError(PadicError):
    pass


class NonUnitError(PadicError):
    pass


class NotDivisibleError(PadicError):
    pass


class NotInImageError(PadicError):
    pass


class NotPsiZeroError(NotInImageError):
    pass


class NotDeltaInvariantError(NotInImageError):
    """Raised when a psi-zero series is not in the (1+pi)*phi(...) component."""


class EigenvalueError(PadicError):
    """An eigenvalue of Frobenius is an integral power of p."""


class InvalidFormError(PadicError):
    pass


class OrdinaryUnsupportedError(PadicError):
    pass


class InvalidWachDataError(PadicError):
    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}" if detail else invariant)


class ResonanceError(PadicError):
    def __init__(self, degree: int):
        self.degree = degree
        super().__init__(f"singular Sylvester operator at pi-degree {degree}")


class DuplicatePointError(PadicError):
    pass


class InconsistencyError(PadicError):
    """Two independent computations of the same quantity disagree."""


class IndeterminateError(PadicError):
    """Precision is insufficient to decide a question."""

    def __init__(self, message: str, margin: int | None = None):
        self.margin = margin
        super().__init__(message)
