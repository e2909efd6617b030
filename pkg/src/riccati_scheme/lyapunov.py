"""Continuous Lyapunov equation ``S^T X + X S = Y`` for symmetric ``Y``."""

from dataclasses import dataclass

import numpy as np

from .exceptions import LyapunovHypothesisViolated, NotPositiveDefinite, SingularMatrix, SingularSystem
from .linalg import _solve_dense, as_matrix, as_symmetric, cholesky

__all__ = ["LyapunovProblem", "check_hypothesis", "lyapunov_operator", "solve_lyapunov"]


@dataclass(frozen=True)
class LyapunovProblem:
    """Data of ``S^T X + X S = Y``.

    ``S`` need not be symmetric.  With the default ``hypothesis="definite"``
    its quadratic form must be strictly positive (``S + S^T`` positive
    definite); that makes ``X -> S^T X + X S`` a bijection of the symmetric
    matrices which keeps the positive cone inside itself.

    ``hypothesis="stable"`` only asks every eigenvalue of ``S`` to have a
    positive real part.  That is weaker but still sufficient: the solution is
    then ``int_0^inf exp(-S^T t) Y exp(-S t) dt``, which is positive
    (semi-)definite whenever ``Y`` is.
    """

    S: np.ndarray
    Y: np.ndarray
    hypothesis: str = "definite"

    def __post_init__(self):
        S = as_matrix(self.S, "S")
        n = S.shape[0]
        if S.shape[1] != n:
            raise LyapunovHypothesisViolated(f"S must be square, got shape {S.shape}")
        Y = as_symmetric(self.Y, "Y", n=n)
        check_hypothesis(S, self.hypothesis)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self):
        return self.S.shape[0]


def check_hypothesis(S, hypothesis="definite"):
    """Raise :class:`LyapunovHypothesisViolated` unless ``S`` satisfies ``hypothesis``."""
    if hypothesis not in ("definite", "stable"):
        raise ValueError(f"unknown hypothesis {hypothesis!r}")
    try:
        cholesky(S + S.T)
    except NotPositiveDefinite as exc:
        if hypothesis == "definite":
            raise LyapunovHypothesisViolated(
                f"S + S^T is not positive definite (pivot {exc.pivot})"
            ) from exc
        re_min = np.min(np.linalg.eigvals(S).real)
        if not re_min > 0:
            raise LyapunovHypothesisViolated(
                f"S has an eigenvalue with real part {re_min:.3g} <= 0"
            ) from exc


def lyapunov_operator(S):
    """Matrix of ``X -> S^T X + X S`` acting on row-major ``vec(X)``.

    Equal to ``kron(S^T, I) + kron(I, S^T)``.
    """
    St = np.asarray(S, dtype=float).T
    n = St.shape[0]
    eye = np.eye(n)
    L = St[:, None, :, None] * eye[None, :, None, :] + eye[:, None, :, None] * St[None, :, None, :]
    return L.reshape(n * n, n * n)


def _solve(S, Y):
    n = S.shape[0]
    try:
        x = _solve_dense(lyapunov_operator(S), Y.reshape(-1))
    except SingularMatrix as exc:
        raise SingularSystem(str(exc)) from exc
    X = x.reshape(n, n)
    return 0.5 * (X + X.T)


def solve_lyapunov(problem):
    """Solve ``S^T X + X S = Y`` through the Kronecker-sum linear system.

    The n^2 x n^2 system is dense, which is fine for the small ``n`` this
    package targets.  The result is symmetrized before being returned.

    Parameters
    ----------
    problem : LyapunovProblem

    Returns
    -------
    X : (n, n) ndarray
        Symmetric solution; positive (semi-)definite whenever ``Y`` is.
    """
    return _solve(problem.S, problem.Y)
