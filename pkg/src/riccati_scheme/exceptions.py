"""Exception hierarchy shared by every module of the package."""


class RiccatiError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RiccatiError, ValueError):
    """Input data violates a documented precondition."""


class NotPositiveDefinite(RiccatiError, ValueError):
    """Cholesky factorization met a non-positive pivot.

    Attributes
    ----------
    pivot : int
        Index of the first pivot that was ``<= 0``.
    """

    def __init__(self, pivot, value=None):
        self.pivot = pivot
        self.value = value
        msg = f"matrix is not positive definite (pivot {pivot}"
        if value is not None:
            msg += f" = {value:.6g}"
        super().__init__(msg + ")")


class SingularMatrix(RiccatiError, ArithmeticError):
    """Dense elimination hit a pivot below the singularity threshold."""


class NonConvergence(RiccatiError, ArithmeticError):
    """An iterative eigen-solver exhausted its sweep budget."""


class SingularSystem(RiccatiError, ArithmeticError):
    """The vectorized Lyapunov operator turned out to be singular."""


class LyapunovHypothesisViolated(ValidationError):
    """``S + S^T`` is not positive definite, so the Lyapunov map may not be invertible."""


class DegenerateTimeStep(ValidationError):
    """The time step collapses the scalar homographic map to a constant."""


class SingularR(ValidationError):
    """The control weight ``R`` is not positive definite."""


class OraclePositivityLost(RiccatiError, ArithmeticError):
    """The Runge-Kutta reference lost positivity and cannot serve as an oracle."""


class PositivityViolation(RiccatiError, ArithmeticError):
    """An iterate of the homographic scheme left the positive cone (should never happen)."""
