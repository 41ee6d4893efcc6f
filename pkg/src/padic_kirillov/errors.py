"""Exception types raised across the package."""


class PadicError(ValueError):
    """Base class for arithmetic and contract failures."""


class PrecisionError(PadicError):
    """The requested quantity is not determined at the working precision."""


class NonOrdinaryError(PadicError):
    """No unit root exists (the input is not ordinary)."""


class DivisibilityError(PadicError):
    """An exact division by a power of p failed."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class StabilityError(PadicError):
    """A basis is not stable under U_p at the given truncation and precision."""

    def __init__(self, message, basis_index=None, residual=None):
        super().__init__(message)
        self.basis_index = basis_index
        self.residual = residual


class RankError(PadicError):
    """A basis has a dependency modulo p^k."""


class TailError(PadicError):
    """A function leaves the finite shell-plus-tail data model."""


class SchemaError(PadicError):
    """An input document does not match its schema."""
