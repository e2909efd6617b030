import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from riccati_scheme.exceptions import NotPositiveDefinite, SingularMatrix, ValidationError
from riccati_scheme.linalg import as_symmetric, cholesky, solve_dense, sym_eigen

from conftest import SQRT_Q, SQRT_Q_ROOT, random_orthogonal


def test_cholesky_identity():
    np.testing.assert_array_equal(cholesky(np.eye(2)), np.eye(2))


def test_cholesky_sqrt_q():
    L = cholesky(SQRT_Q)
    assert np.allclose(np.tril(L), L)
    assert np.linalg.norm(L @ L.T - SQRT_Q) <= 1e-12 * np.linalg.norm(SQRT_Q)


def test_cholesky_reports_first_bad_pivot():
    with pytest.raises(NotPositiveDefinite) as info:
        cholesky([[0.0, 0.0], [0.0, 1.0]])
    assert info.value.pivot == 0
    with pytest.raises(NotPositiveDefinite) as info:
        cholesky(np.diag([1.0, 2.0, -1.0]))
    assert info.value.pivot == 2


def test_as_symmetric_symmetrizes_and_rejects_nan():
    S = as_symmetric([[1.0, 2.0], [0.0, 1.0]])
    assert S[0, 1] == S[1, 0] == 1.0
    with pytest.raises(ValidationError):
        as_symmetric([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValidationError):
        as_symmetric(np.ones((2, 3)))


@pytest.mark.parametrize("S, expected", [
    (np.diag([3.0, 1.0]), [1.0, 3.0]),
    (SQRT_Q, [1.0, 100.0]),
    (SQRT_Q_ROOT, [1.0, 10.0]),
])
def test_sym_eigen_examples(S, expected):
    np.testing.assert_allclose(sym_eigen(S).eigenvalues, expected, rtol=1e-12)


def test_sqrt_q_root_squares_to_q():
    np.testing.assert_allclose(SQRT_Q_ROOT @ SQRT_Q_ROOT, SQRT_Q, rtol=1e-14)


def test_sym_eigen_is_deterministic(rng):
    S = rng.normal(size=(6, 6))
    a, b = sym_eigen(S), sym_eigen(S)
    np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
    np.testing.assert_array_equal(a.eigenvectors, b.eigenvectors)


@given(arrays(np.float64, st.tuples(st.integers(1, 8), st.just(8)),
              elements=st.floats(-100, 100, allow_nan=False)))
def test_sym_eigen_invariants(block):
    n = block.shape[0]
    S = as_symmetric(block[:, :n])
    w, V = sym_eigen(S)
    scale = max(1.0, np.linalg.norm(S))
    assert np.all(np.diff(w) >= 0)
    assert np.linalg.norm(V @ np.diag(w) @ V.T - S) <= 1e-10 * scale
    assert np.linalg.norm(V.T @ V - np.eye(n)) <= 1e-10
    assert abs(w.sum() - np.trace(S)) <= 1e-10 * scale
    np.testing.assert_allclose(w, np.linalg.eigvalsh(S), atol=1e-10 * scale)


def test_cholesky_agrees_with_spectrum(rng):
    for _ in range(300):
        n = int(rng.integers(1, 7))
        U = random_orthogonal(rng, n)
        lam = rng.uniform(1e-6, 10, size=n) * rng.choice([-1.0, 1.0], size=n, p=[0.3, 0.7])
        S = U @ np.diag(lam) @ U.T
        definite = bool(np.all(sym_eigen(S).eigenvalues > 0))
        try:
            cholesky(S)
            ok = True
        except NotPositiveDefinite:
            ok = False
        assert ok == definite == bool(np.all(lam > 0))


@pytest.mark.parametrize("A, b, x", [
    (np.eye(3), [1.0, -2.0, 3.0], [1.0, -2.0, 3.0]),
    ([[2.0, 0.0], [0.0, 4.0]], [2.0, 4.0], [1.0, 1.0]),
    ([[1.0, 1.0], [0.0, 1.0]], [3.0, 1.0], [2.0, 1.0]),
])
def test_solve_dense_examples(A, b, x):
    np.testing.assert_allclose(solve_dense(A, b), x, rtol=1e-14)


def test_solve_dense_needs_pivoting():
    np.testing.assert_allclose(solve_dense([[0.0, 1.0], [1.0, 0.0]], [2.0, 3.0]), [3.0, 2.0])


def test_solve_dense_round_trip(rng):
    for _ in range(200):
        n = int(rng.integers(1, 30))
        U, V = random_orthogonal(rng, n), random_orthogonal(rng, n)
        sv = np.logspace(0, -rng.uniform(0, 6), n)
        A = U @ np.diag(sv) @ V.T
        b = rng.normal(size=n)
        x = solve_dense(A, b)
        bound = 1e-10 * max(1.0, np.abs(A).sum(axis=1).max() * np.abs(x).max())
        assert np.abs(A @ x - b).max() <= bound


def test_solve_dense_matrix_rhs(rng):
    A = rng.normal(size=(4, 4)) + 4 * np.eye(4)
    B = rng.normal(size=(4, 3))
    np.testing.assert_allclose(A @ solve_dense(A, B), B, atol=1e-12)


def test_solve_dense_singular():
    with pytest.raises(SingularMatrix):
        solve_dense([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])
    with pytest.raises(SingularMatrix):
        solve_dense(np.zeros((2, 2)), [1.0, 1.0])
