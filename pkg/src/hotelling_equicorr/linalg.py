"""Small dense symmetric linear algebra.

Cholesky factorization, SPD solves and a Jacobi-based Moore-Penrose
pseudo-inverse. Every routine accepts a single ``(n, n)`` matrix or a stack
``(..., n, n)``; stacked inputs are processed in lock-step so the Monte Carlo
and permutation code can hand over thousands of small matrices at once.
"""

import numpy as np

from .exceptions import EigenFailure, InvalidInput, NotPositiveDefinite

DEFAULT_RANK_TOL = 1e-10
MAX_SWEEPS = 100
OFFDIAG_TOL = 1e-12

_EPS = np.finfo(float).eps


def _as_square(m):
    m = np.asarray(m, dtype=float)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2] or m.shape[-1] < 1:
        raise InvalidInput(f"expected square matrix or stack of them, got shape {m.shape}")
    return m


def equicorrelation(n, rho):
    """Return the n x n matrix with unit diagonal and constant off-diagonal ``rho``."""
    sigma = np.full((n, n), float(rho))
    np.fill_diagonal(sigma, 1.0)
    return sigma


def cholesky(m):
    """Lower-triangular ``L`` with ``L @ L.T == m``.

    Raises NotPositiveDefinite when a pivot is <= dim * eps * max(diag(m)).
    """
    m = _as_square(m)
    n = m.shape[-1]
    L = np.zeros_like(m)
    max_diag = np.max(np.diagonal(m, axis1=-2, axis2=-1), axis=-1)
    threshold = n * _EPS * np.maximum(max_diag, 0.0)
    for j in range(n):
        row = L[..., j, :j]
        pivot = m[..., j, j] - np.einsum("...k,...k->...", row, row)
        bad = ~(pivot > threshold)
        if np.any(bad):
            raise NotPositiveDefinite(
                f"pivot {j} is not positive (value {np.min(pivot):.3e}); matrix is not SPD"
            )
        d = np.sqrt(pivot)
        L[..., j, j] = d
        if j + 1 < n:
            below = m[..., j + 1:, j] - np.einsum("...ik,...k->...i", L[..., j + 1:, :j], row)
            L[..., j + 1:, j] = below / d[..., None]
    return L


def _forward(L, b):
    n = L.shape[-1]
    y = np.empty_like(b)
    for i in range(n):
        y[..., i] = (b[..., i] - np.einsum("...k,...k->...", L[..., i, :i], y[..., :i])) / L[..., i, i]
    return y


def _backward(L, y):
    # solves L.T x = y
    n = L.shape[-1]
    x = np.empty_like(y)
    for i in range(n - 1, -1, -1):
        x[..., i] = (y[..., i] - np.einsum("...k,...k->...", L[..., i + 1:, i], x[..., i + 1:])) / L[..., i, i]
    return x


def cho_solve(L, rhs):
    """Solve ``(L L^T) v = rhs`` given a factor from :func:`cholesky`."""
    rhs = np.asarray(rhs, dtype=float)
    return _backward(L, _forward(L, rhs))


def solve_spd(m, rhs):
    """Solve ``m v = rhs`` for symmetric positive definite ``m``."""
    m = _as_square(m)
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape[-1] != m.shape[-1]:
        raise InvalidInput(f"rhs has length {rhs.shape[-1]}, matrix has dim {m.shape[-1]}")
    return cho_solve(cholesky(m), rhs)


def jacobi_eigh(m, max_sweeps=MAX_SWEEPS, tol=OFFDIAG_TOL):
    """Eigen-decomposition of symmetric matrices by cyclic Jacobi rotations.

    Returns ``(w, V)`` with ``m == V @ diag(w) @ V.T``. Eigenvalues are not
    sorted. Iteration stops once every off-diagonal Frobenius norm is below
    ``tol * ||m||_F``; EigenFailure is raised after ``max_sweeps`` sweeps.
    """
    m = _as_square(m)
    A = 0.5 * (m + np.swapaxes(m, -1, -2))
    n = A.shape[-1]
    V = np.broadcast_to(np.eye(n), A.shape).copy()
    scale = np.sqrt(np.sum(A * A, axis=(-2, -1)))
    limit = tol * scale

    def off_norm(A):
        off = A - np.einsum("...ii->...i", A)[..., None] * np.eye(n)
        return np.sqrt(np.sum(off * off, axis=(-2, -1)))

    for _ in range(max_sweeps):
        if np.all(off_norm(A) <= limit):
            return np.einsum("...ii->...i", A).copy(), V
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[..., p, q]
                active = np.abs(apq) > 0.0
                if not np.any(active):
                    continue
                safe_apq = np.where(active, apq, 1.0)
                theta = (A[..., q, q] - A[..., p, p]) / (2.0 * safe_apq)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cc, sc = c[..., None], s[..., None]

                col_p, col_q = A[..., :, p].copy(), A[..., :, q].copy()
                A[..., :, p] = cc * col_p - sc * col_q
                A[..., :, q] = sc * col_p + cc * col_q
                row_p, row_q = A[..., p, :].copy(), A[..., q, :].copy()
                A[..., p, :] = cc * row_p - sc * row_q
                A[..., q, :] = sc * row_p + cc * row_q
                A[..., p, q] = 0.0
                A[..., q, p] = 0.0

                v_p, v_q = V[..., :, p].copy(), V[..., :, q].copy()
                V[..., :, p] = cc * v_p - sc * v_q
                V[..., :, q] = sc * v_p + cc * v_q
    if np.all(off_norm(A) <= limit):
        return np.einsum("...ii->...i", A).copy(), V
    raise EigenFailure(f"Jacobi iteration did not converge in {max_sweeps} sweeps")


def pseudo_inverse(m, rank_tol=DEFAULT_RANK_TOL):
    """Moore-Penrose pseudo-inverse of a symmetric matrix.

    Eigenvalues with ``|w| <= rank_tol * max|w|`` are treated as zero.
    """
    if not rank_tol > 0:
        raise InvalidInput("rank_tol must be positive")
    w, V = jacobi_eigh(m)
    cutoff = rank_tol * np.max(np.abs(w), axis=-1, keepdims=True)
    keep = np.abs(w) > cutoff
    inv_w = np.where(keep, 1.0 / np.where(keep, w, 1.0), 0.0)
    pinv = np.einsum("...ik,...k,...jk->...ij", V, inv_w, V)
    return 0.5 * (pinv + np.swapaxes(pinv, -1, -2))
