"""Linear-quadratic regulator data, reduction to a Riccati problem, and closed-loop checks."""

from dataclasses import dataclass

import numpy as np

from .exceptions import NotPositiveDefinite, SingularR, ValidationError
from .linalg import as_matrix, as_symmetric, as_vector, cholesky, solve_dense, sym_eigen
from .riccati import RiccatiProblem

__all__ = [
    "ClosedLoopRun",
    "ControlProblem",
    "assemble_riccati",
    "closed_loop_eigenvalues",
    "feedback_gain",
    "simulate_closed_loop",
]


@dataclass(frozen=True)
class ControlProblem:
    """Plant ``y' = A y + B v`` with cost weights ``Q`` (state) and ``R`` (control).

    ``horizon`` is the final time of the finite-horizon cost; ``None`` means
    the problem is only used through its steady state.
    """

    A: np.ndarray
    B: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    horizon: float = None

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValidationError(f"A must be square, got shape {A.shape}")
        B = as_matrix(self.B, "B")
        if B.shape[0] != n:
            raise ValidationError(f"B must have {n} rows, got shape {B.shape}")
        m = B.shape[1]
        Q = as_symmetric(self.Q, "Q", n=n)
        R = as_symmetric(self.R, "R", n=m)
        if sym_eigen(Q).eigenvalues[0] < -1e-12 * np.linalg.norm(Q):
            raise ValidationError("Q must be positive semi-definite")
        try:
            cholesky(R)
        except NotPositiveDefinite as exc:
            raise SingularR(f"R is not positive definite (pivot {exc.pivot})") from exc
        if self.horizon is not None and not self.horizon > 0:
            raise ValidationError(f"horizon must be > 0, got {self.horizon}")
        for name, value in (("A", A), ("B", B), ("Q", Q), ("R", R)):
            object.__setattr__(self, name, value)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.B.shape[1]


def _r_inv_bt(cp):
    return solve_dense(cp.R, cp.B.T)


def assemble_riccati(cp, X0=None):
    """Riccati problem with ``K = B R^{-1} B^T`` and ``X(0) = 0`` by default.

    ``K`` is only semi-definite when ``m < n`` or ``B`` is rank deficient;
    the returned problem's ``k_definite`` says which.
    """
    K = cp.B @ _r_inv_bt(cp)
    return RiccatiProblem(cp.A, 0.5 * (K + K.T), cp.Q, X0)


def feedback_gain(cp, X_inf):
    """Steady-state gain ``G = R^{-1} B^T X_inf``; the control is ``v = -G y``."""
    X_inf = as_symmetric(X_inf, "X_inf", n=cp.n)
    return _r_inv_bt(cp) @ X_inf


def closed_loop_eigenvalues(cp, G):
    """Eigenvalues of ``A - B G``, sorted by real part then imaginary part."""
    G = as_matrix(G, "G", shape=(cp.m, cp.n))
    w = np.linalg.eigvals(cp.A - cp.B @ G)
    return w[np.lexsort((w.imag, w.real))]


@dataclass(frozen=True)
class ClosedLoopRun:
    """Samples of ``y' = (A - B G) y`` with the control ``v = -G y``.

    ``cost`` is the trapezoidal approximation of
    ``1/2 int (Q y, y) + (R v, v) dt`` over the simulated window.
    """

    y0: np.ndarray
    G: np.ndarray
    times: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    cost: float


def simulate_closed_loop(cp, G, y0, dt_sim, n_steps):
    """Integrate the closed loop with classical RK4 from ``y0``."""
    if not dt_sim > 0:
        raise ValidationError(f"dt_sim must be > 0, got {dt_sim}")
    G = as_matrix(G, "G", shape=(cp.m, cp.n))
    y = as_vector(y0, "y0", n=cp.n)
    F = cp.A - cp.B @ G
    h = float(dt_sim)
    states = np.empty((int(n_steps) + 1, cp.n))
    states[0] = y
    for j in range(int(n_steps)):
        k1 = F @ y
        k2 = F @ (y + 0.5 * h * k1)
        k3 = F @ (y + 0.5 * h * k2)
        k4 = F @ (y + h * k3)
        y = y + h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        states[j + 1] = y
    controls = -states @ G.T
    integrand = 0.5 * (np.einsum("ti,ij,tj->t", states, cp.Q, states)
                       + np.einsum("ti,ij,tj->t", controls, cp.R, controls))
    cost = float(h * (integrand.sum() - 0.5 * (integrand[0] + integrand[-1])))
    times = h * np.arange(int(n_steps) + 1)
    return ClosedLoopRun(states[0].copy(), G, times, states, controls, cost)
