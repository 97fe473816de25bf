"""Exception types shared across the library."""


class SoftMmseError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(SoftMmseError):
    """Operands have incompatible shapes."""


class NotHPDError(SoftMmseError):
    """A matrix required to be Hermitian positive definite is not."""


class SingularMatrixError(SoftMmseError):
    """A small matrix inversion hit a (near-)zero determinant."""


class DegenerateComponentError(SoftMmseError):
    """A component cannot be conditionally de-biased (unobservable or
    numerically unestimable)."""

    def __init__(self, component: int, message: str = ""):
        self.component = component
        super().__init__(message or f"component {component} is degenerate")


class BadSpecError(SoftMmseError):
    """A config or spec object failed validation."""
