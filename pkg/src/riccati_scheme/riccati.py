"""Matrix Riccati equation ``X' - (X A + A^T X) + X K X - Q = 0`` and the homographic scheme.

With ``A = (mu/2) I - M`` the positive part ``(mu/2) I`` is explicit and ``M``
implicit; the quadratic term is split as ``(X_j K X_{j+1} + X_{j+1} K X_j)/2``.
Each step is then a Lyapunov solve ``S_j^T X + X S_j = Y_j`` with

    S_j = I/2 + (dt/2) K X_j + dt M
    Y_j = (1 + mu dt) X_j + dt Q
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import NotPositiveDefinite, PositivityViolation, ValidationError
from .linalg import as_matrix, as_symmetric, cholesky, sym_eigen
from .lyapunov import _solve, check_hypothesis

__all__ = [
    "RiccatiProblem",
    "SchemeConfig",
    "Trajectory",
    "are_residual",
    "check_monotonicity_condition",
    "euler_step",
    "integrate",
    "riccati_rhs",
    "riccati_step",
    "select_mu",
]

logger = logging.getLogger(__name__)

DEFAULT_MU_MARGIN = 0.1
_PSD_RTOL = 1e-10
_DATA_PSD_RTOL = 1e-12


def _psd_floor(S, rtol):
    return -rtol * max(np.linalg.norm(S), np.finfo(float).tiny)


@dataclass(frozen=True)
class RiccatiProblem:
    """Coefficients of the Riccati equation and its initial value.

    ``K`` may be only positive semi-definite (single-input plants give a
    rank-one ``K``); ``k_definite`` records which case applies.
    """

    A: np.ndarray
    K: np.ndarray
    Q: np.ndarray
    X0: np.ndarray = None
    k_definite: bool = field(init=False)

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValidationError(f"A must be square, got shape {A.shape}")
        K = as_symmetric(self.K, "K", n=n)
        Q = as_symmetric(self.Q, "Q", n=n)
        X0 = np.zeros((n, n)) if self.X0 is None else as_symmetric(self.X0, "X0", n=n)
        for name, S in (("K", K), ("Q", Q), ("X0", X0)):
            if sym_eigen(S).eigenvalues[0] < _psd_floor(S, _DATA_PSD_RTOL):
                raise ValidationError(f"{name} must be positive semi-definite")
        try:
            cholesky(K)
            k_definite = True
        except NotPositiveDefinite:
            k_definite = False
            logger.debug("K is only positive semi-definite")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "X0", X0)
        object.__setattr__(self, "k_definite", k_definite)

    @property
    def n(self):
        return self.A.shape[0]


def select_mu(A, margin=DEFAULT_MU_MARGIN):
    """Smallest-plus-margin ``mu`` with ``mu I - (A + A^T)`` positive definite.

    Returns ``max(0, lambda_max(A + A^T)) + margin``.
    """
    if not margin > 0:
        raise ValidationError(f"margin must be > 0, got {margin}")
    A = as_matrix(A, "A")
    lam_max = sym_eigen(A + A.T).eigenvalues[-1]
    return max(0.0, float(lam_max)) + margin


@dataclass(frozen=True)
class SchemeConfig:
    """Time step, splitting parameter and stopping rule.

    Parameters
    ----------
    dt : float
    mu : float or None
        Splitting parameter; ``None`` selects it with :func:`select_mu`.
    max_steps : int
    steady_tol : float
        Stop once the Frobenius norm of the algebraic residual is below this.
    stride : int
        Record every ``stride``-th step in the trajectory (the last step is
        always recorded).
    mu_margin : float
        Margin used when ``mu`` is selected automatically.
    """

    dt: float = 0.01
    mu: float = None
    max_steps: int = 2000
    steady_tol: float = 1e-10
    stride: int = 1
    mu_margin: float = DEFAULT_MU_MARGIN

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ValidationError(f"dt must be > 0, got {self.dt}")
        if self.mu is not None and not (np.isfinite(self.mu) and self.mu >= 0):
            raise ValidationError(f"mu must be >= 0, got {self.mu}")
        if int(self.max_steps) < 0:
            raise ValidationError(f"max_steps must be >= 0, got {self.max_steps}")
        if int(self.stride) < 1:
            raise ValidationError(f"stride must be >= 1, got {self.stride}")
        if not self.steady_tol >= 0:
            raise ValidationError(f"steady_tol must be >= 0, got {self.steady_tol}")

    def resolve_mu(self, A):
        return select_mu(A, self.mu_margin) if self.mu is None else float(self.mu)

    def splitting(self, A):
        """Return ``(mu, M)`` with ``M = (mu/2) I - A``.

        Raises
        ------
        ValidationError
            If ``mu I - (A + A^T)`` is not positive definite, i.e. ``M`` is
            not dissipative.
        """
        A = as_matrix(A, "A")
        mu = self.resolve_mu(A)
        n = A.shape[0]
        try:
            cholesky(mu * np.eye(n) - (A + A.T))
        except NotPositiveDefinite as exc:
            raise ValidationError(
                f"mu={mu} too small: mu I - (A + A^T) is not positive definite"
            ) from exc
        return mu, 0.5 * mu * np.eye(n) - A


def _step(X, K, Q, M, mu, dt):
    n = X.shape[0]
    S = 0.5 * np.eye(n) + 0.5 * dt * (K @ X) + dt * M
    Y = (1.0 + mu * dt) * X + dt * Q
    # S + S^T can be indefinite when K X + X K is; S stays positive stable.
    check_hypothesis(S, "stable")
    return _solve(S, Y)


def riccati_step(p, c, X_j):
    """Advance one homographic step from ``X_j``.

    Solves ``(X' - X_j)/dt + (X_j K X' + X' K X_j)/2 + M^T X' + X' M = mu X_j + Q``
    for ``X'``.  ``X'`` is positive semi-definite whenever ``X_j`` is, for
    any ``dt > 0``.
    """
    mu, M = c.splitting(p.A)
    X_j = as_symmetric(X_j, "X_j", n=p.n)
    return _step(X_j, p.K, p.Q, M, mu, c.dt)


def are_residual(p, X):
    """Algebraic Riccati residual ``-(X A + A^T X) + X K X - Q`` (symmetrized)."""
    X = as_symmetric(X, "X", n=p.n)
    return _are_residual(p, X)


def _are_residual(p, X):
    R = -(X @ p.A + p.A.T @ X) + X @ p.K @ X - p.Q
    return 0.5 * (R + R.T)


def riccati_rhs(p, X):
    """Time derivative ``X A + A^T X - X K X + Q``, i.e. minus the algebraic residual."""
    return -are_residual(p, X)


def euler_step(p, X_j, dt):
    """Forward Euler step; carries no positivity guarantee."""
    X_j = as_symmetric(X_j, "X_j", n=p.n)
    X = X_j + dt * riccati_rhs(p, X_j)
    return 0.5 * (X + X.T)


def check_monotonicity_condition(p, c, X_inf):
    """Spectral test ``lambda_max((K X_inf + X_inf K)/2) < mu + 1/dt``.

    The comparison is strict with a relative slack of ``1e-12`` counted
    against the condition.
    """
    X_inf = as_symmetric(X_inf, "X_inf", n=p.n)
    mu = c.resolve_mu(p.A)
    lam = sym_eigen(0.5 * (p.K @ X_inf + X_inf @ p.K)).eigenvalues[-1]
    bound = mu + 1.0 / c.dt
    return bool(lam < bound * (1.0 - 1e-12))


@dataclass(frozen=True)
class Trajectory:
    """Recorded iterates of an integration.

    Attributes
    ----------
    steps : (N,) int ndarray
    times : (N,) ndarray
    X : (N, n, n) ndarray
    eigenvalues : (N, n) ndarray
        Ascending per sample.
    residuals : (N,) ndarray
        Frobenius norm of :func:`are_residual` per sample.
    mu, dt : float
    converged : bool
        Whether the steady tolerance was met.
    """

    steps: np.ndarray
    times: np.ndarray
    X: np.ndarray
    eigenvalues: np.ndarray
    residuals: np.ndarray
    mu: float
    dt: float
    converged: bool

    def __len__(self):
        return len(self.steps)

    @property
    def final(self):
        return self.X[-1]

    @property
    def n(self):
        return self.X.shape[1]

    def rows(self):
        """Yield ``(step, time, lambda_1, ..., lambda_n, residual)`` tuples."""
        for i in range(len(self.steps)):
            yield (int(self.steps[i]), float(self.times[i]),
                   *map(float, self.eigenvalues[i]), float(self.residuals[i]))


def integrate(p, c):
    """Iterate the homographic scheme from ``p.X0``.

    Stops after ``c.max_steps`` steps or as soon as the algebraic residual
    drops below ``c.steady_tol``.  Every recorded iterate is checked to be
    positive semi-definite up to ``1e-10 ||X||_F``.
    """
    mu, M = c.splitting(p.A)
    dt = c.dt
    stride = int(c.stride)
    steps, times, Xs, eigs, res = [], [], [], [], []

    def record(j, X):
        w = sym_eigen(X).eigenvalues
        if w[0] < _psd_floor(X, _PSD_RTOL):
            raise PositivityViolation(f"iterate {j} has eigenvalue {w[0]:.3g}")
        steps.append(j)
        times.append(j * dt)
        Xs.append(X)
        eigs.append(w)
        res.append(r)

    X = p.X0
    r = np.linalg.norm(are_residual(p, X))
    record(0, X)
    converged = r <= c.steady_tol
    j = 0
    while not converged and j < c.max_steps:
        X = _step(X, p.K, p.Q, M, mu, dt)
        j += 1
        r = np.linalg.norm(_are_residual(p, X))
        converged = r <= c.steady_tol
        if j % stride == 0 or converged or j == c.max_steps:
            record(j, X)
    return Trajectory(
        steps=np.array(steps, dtype=int),
        times=np.array(times),
        X=np.array(Xs),
        eigenvalues=np.array(eigs),
        residuals=np.array(res),
        mu=mu,
        dt=dt,
        converged=bool(converged),
    )
