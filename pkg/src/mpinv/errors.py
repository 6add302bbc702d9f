"""Exception hierarchy.

Input problems derive from :class:`ValueError`; numerical failures derive from
:class:`NumericalError` so callers (and the CLI exit-code mapping) can tell
them apart.
"""


class ShapeMismatch(ValueError):
    """Operand shapes are incompatible with the requested operation."""


class NonFiniteEntry(ValueError):
    """A NaN or infinite value was offered to a matrix constructor."""


class NumericalError(ArithmeticError):
    """Base class for failures of a numerical procedure."""


class SingularMatrix(NumericalError):
    """Elimination met a pivot below the pivot tolerance."""


class NotHermitian(NumericalError):
    """Input to a Hermitian-only routine is not self-adjoint within tolerance."""


class NotPSD(NumericalError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""


class NoConvergence(NumericalError):
    """An iteration exhausted its step budget."""


class DegenerateSeparation(NumericalError):
    """Eigenvalues are too close for a Lagrange-type polynomial construction."""


class RouteFailed(NumericalError):
    """Every attempted pseudoinverse route failed.

    ``failures`` maps route names to the exception each one raised.
    """

    def __init__(self, message: str, failures: dict[str, BaseException] | None = None):
        super().__init__(message)
        self.failures = dict(failures or {})
