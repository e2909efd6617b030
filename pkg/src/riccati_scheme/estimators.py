"""scikit-learn style wrappers around the homographic Riccati integrator."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .control import (
    ControlProblem,
    assemble_riccati,
    closed_loop_eigenvalues,
    feedback_gain,
    simulate_closed_loop,
)
from .riccati import DEFAULT_MU_MARGIN, RiccatiProblem, SchemeConfig, are_residual, integrate

__all__ = ["LQRController", "RiccatiSolver"]


def _config(est):
    mu = None if est.mu in (None, "auto") else float(est.mu)
    return SchemeConfig(dt=est.dt, mu=mu, max_steps=est.max_steps,
                        steady_tol=est.steady_tol, stride=est.stride,
                        mu_margin=est.mu_margin)


class RiccatiSolver(BaseEstimator):
    """Integrate ``X' = X A + A^T X - X K X + Q`` to steady state.

    Parameters
    ----------
    dt : float, default=0.01
        Time step; any positive value keeps the iterates positive.
    mu : float or "auto", default="auto"
        Splitting parameter.  ``"auto"`` takes
        ``max(0, lambda_max(A + A^T)) + mu_margin``.
    max_steps : int, default=2000
    steady_tol : float, default=1e-10
        Frobenius tolerance on the algebraic Riccati residual.
    stride : int, default=1
        Keep every ``stride``-th iterate in ``trajectory_``.
    mu_margin : float, default=0.1

    Attributes
    ----------
    problem_ : RiccatiProblem
    trajectory_ : Trajectory
    solution_ : ndarray of shape (n, n)
        Last iterate.
    mu_ : float
    converged_ : bool
    n_steps_ : int
    """

    def __init__(self, dt=0.01, mu="auto", max_steps=2000, steady_tol=1e-10,
                 stride=1, mu_margin=DEFAULT_MU_MARGIN):
        self.dt = dt
        self.mu = mu
        self.max_steps = max_steps
        self.steady_tol = steady_tol
        self.stride = stride
        self.mu_margin = mu_margin

    def fit(self, A, K, Q, X0=None):
        self.problem_ = RiccatiProblem(A, K, Q, X0)
        self.trajectory_ = integrate(self.problem_, _config(self))
        self.solution_ = self.trajectory_.final
        self.mu_ = self.trajectory_.mu
        self.converged_ = self.trajectory_.converged
        self.n_steps_ = int(self.trajectory_.steps[-1])
        self.n_features_in_ = self.problem_.n
        return self

    def residual(self, X=None):
        """Algebraic Riccati residual of ``X`` (default: the fitted solution)."""
        check_is_fitted(self, "solution_")
        return are_residual(self.problem_, self.solution_ if X is None else X)


class LQRController(BaseEstimator):
    """Steady-state linear-quadratic regulator computed with the homographic scheme.

    ``fit(A, B)`` integrates the Riccati equation from zero until the
    algebraic residual drops below ``steady_tol`` and stores the gain
    ``G = R^{-1} B^T X``.  ``predict(Y)`` returns the controls ``-G y`` for
    each row ``y`` of ``Y``.

    Parameters
    ----------
    Q : array-like of shape (n, n), default=None
        State weight; identity when omitted.
    R : array-like of shape (m, m), default=None
        Control weight; identity when omitted.
    dt, mu, max_steps, steady_tol, stride, mu_margin
        As in :class:`RiccatiSolver`.
    """

    def __init__(self, Q=None, R=None, dt=0.01, mu="auto", max_steps=20000,
                 steady_tol=1e-10, stride=100, mu_margin=DEFAULT_MU_MARGIN):
        self.Q = Q
        self.R = R
        self.dt = dt
        self.mu = mu
        self.max_steps = max_steps
        self.steady_tol = steady_tol
        self.stride = stride
        self.mu_margin = mu_margin

    def fit(self, A, B):
        A = np.asarray(A, dtype=float)
        B = np.asarray(B, dtype=float)
        if B.ndim == 1:
            B = B.reshape(-1, 1)
        n, m = B.shape
        Q = np.eye(n) if self.Q is None else self.Q
        R = np.eye(m) if self.R is None else self.R
        self.control_problem_ = ControlProblem(A, B, Q, R)
        self.riccati_problem_ = assemble_riccati(self.control_problem_)
        self.trajectory_ = integrate(self.riccati_problem_, _config(self))
        self.riccati_solution_ = self.trajectory_.final
        self.converged_ = self.trajectory_.converged
        self.mu_ = self.trajectory_.mu
        self.gain_ = feedback_gain(self.control_problem_, self.riccati_solution_)
        self.closed_loop_eigenvalues_ = closed_loop_eigenvalues(self.control_problem_, self.gain_)
        self.n_features_in_ = n
        return self

    def predict(self, Y):
        check_is_fitted(self, "gain_")
        Y = check_array(Y)
        if Y.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} state components, got {Y.shape[1]}")
        return -Y @ self.gain_.T

    def simulate(self, y0, dt_sim=0.01, n_steps=2000):
        check_is_fitted(self, "gain_")
        return simulate_closed_loop(self.control_problem_, self.gain_, y0, dt_sim, n_steps)
