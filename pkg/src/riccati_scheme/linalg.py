"""Small dense real linear algebra: Cholesky, Jacobi eigensolver, pivoted solve.

Matrices are plain :class:`numpy.ndarray` objects.  ``as_matrix`` and
``as_symmetric`` are the validating constructors; every routine here is a
pure function of its inputs.
"""

from typing import NamedTuple

import numpy as np

from .exceptions import NonConvergence, NotPositiveDefinite, SingularMatrix, ValidationError

__all__ = [
    "Spectrum",
    "as_matrix",
    "as_symmetric",
    "as_vector",
    "cholesky",
    "is_positive_definite",
    "min_eigenvalue",
    "solve_dense",
    "sym_eigen",
]

_JACOBI_MAX_SWEEPS = 100
_JACOBI_TOL = 1e-15
_PIVOT_TOL = 1e-14


class Spectrum(NamedTuple):
    """Eigen-decomposition of a symmetric matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a, name="matrix", shape=None):
    """Return ``a`` as a finite 2-D float array, optionally checking its shape."""
    arr = np.array(a, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValidationError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if shape is not None:
        expected = tuple(s if s is not None else arr.shape[i] for i, s in enumerate(shape))
        if arr.shape != expected:
            raise ValidationError(f"{name} must have shape {expected}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    return arr


def as_symmetric(a, name="matrix", n=None):
    """Return the symmetric part ``(a + a^T) / 2`` of a finite square matrix."""
    arr = as_matrix(a, name, shape=(n, n) if n is not None else None)
    if arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {arr.shape}")
    return 0.5 * (arr + arr.T)


def as_vector(v, name="vector", n=None):
    arr = np.array(v, dtype=float).reshape(-1)
    if n is not None and arr.shape[0] != n:
        raise ValidationError(f"{name} must have length {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    return arr


def cholesky(S):
    """Lower-triangular factor ``L`` with ``L @ L.T == S``.

    A pivot ``<= 0`` means ``S`` is not positive definite; no slack is
    applied, callers that want a tolerance should shift ``S`` themselves.

    Raises
    ------
    NotPositiveDefinite
        With ``pivot`` set to the index of the first failing pivot.
    """
    S = as_symmetric(S, "S")
    n = S.shape[0]
    L = np.zeros_like(S)
    for j in range(n):
        d = S[j, j] - L[j, :j] @ L[j, :j]
        if not d > 0.0:
            raise NotPositiveDefinite(j, d)
        L[j, j] = np.sqrt(d)
        if j + 1 < n:
            L[j + 1:, j] = (S[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def is_positive_definite(S):
    try:
        cholesky(S)
    except NotPositiveDefinite:
        return False
    return True


def sym_eigen(S, max_sweeps=_JACOBI_MAX_SWEEPS):
    """Eigenvalues and orthonormal eigenvectors of a symmetric matrix.

    Cyclic Jacobi: sweep over every off-diagonal pair ``(p, q)`` and zero it
    with a plane rotation.  An entry is treated as zero once it is below
    ``eps * sqrt(|a_pp a_qq|)`` or ``1e-15 * ||S||_F``; iteration stops after a
    sweep without rotations.

    Returns
    -------
    Spectrum
        ``eigenvalues`` ascending, ``eigenvectors`` as matching columns.
    """
    A = as_symmetric(S, "S").copy()
    n = A.shape[0]
    V = np.eye(n)
    eps = np.finfo(float).eps
    floor = _JACOBI_TOL * np.linalg.norm(A)

    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= floor or abs(apq) <= eps * np.sqrt(abs(A[p, p] * A[q, q])):
                    A[p, q] = A[q, p] = 0.0
                    continue
                rotated = True
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                cp = A[:, p].copy()
                cq = A[:, q]
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp = A[p, :].copy()
                rq = A[q, :]
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
        if not rotated:
            break
    else:
        raise NonConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return Spectrum(w[order], V[:, order])


def min_eigenvalue(S):
    return sym_eigen(S).eigenvalues[0]


def solve_dense(A, b):
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    ``b`` may be a vector or a 2-D array of right-hand sides.

    Raises
    ------
    SingularMatrix
        If a pivot magnitude falls below ``1e-14`` times the scale of its
        original row.
    """
    A = as_matrix(A, "A")
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValidationError(f"A must be square, got shape {A.shape}")
    b = np.array(b, dtype=float)
    if b.ndim not in (1, 2) or b.shape[0] != n:
        raise ValidationError(f"b must have {n} rows, got shape {b.shape}")
    return _solve_dense(A, b)


def _solve_dense(A, b):
    n = A.shape[0]
    vector_rhs = b.ndim == 1
    rhs = b.reshape(n, -1).copy() if vector_rhs else b.copy()
    U = A.copy()
    row_scale = np.max(np.abs(A), axis=1)
    for k in range(n):
        piv = k + int(np.argmax(np.abs(U[k:, k])))
        if piv != k:
            U[[k, piv]] = U[[piv, k]]
            rhs[[k, piv]] = rhs[[piv, k]]
            row_scale[[k, piv]] = row_scale[[piv, k]]
        if not abs(U[k, k]) > _PIVOT_TOL * row_scale[k]:
            raise SingularMatrix(f"pivot {k} is numerically zero ({U[k, k]:.3g})")
        if k + 1 < n:
            factors = U[k + 1:, k] / U[k, k]
            U[k + 1:, k:] -= np.outer(factors, U[k, k:])
            rhs[k + 1:] -= np.outer(factors, rhs[k])

    x = np.empty_like(rhs)
    for k in range(n - 1, -1, -1):
        x[k] = (rhs[k] - U[k, k + 1:] @ x[k + 1:]) / U[k, k]
    return x.reshape(-1) if vector_rhs else x
