"""Small dense linear-algebra kernel.

Sizes here are tiny (n_x <= ~10), so clarity is preferred over speed: the
Lyapunov equation is solved by Kronecker vectorisation, and the
positive-definiteness test is an explicit Cholesky sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericError, SingularMatrixError


@dataclass(frozen=True)
class NumericConfig:
    """Every tolerance used by the package, in one place."""

    tol_simplex: float = 1e-9
    tol_rank: float = 1e-9
    tol_pd: float = 1e-9
    tol_lp: float = 1e-9
    cert_tol: float = 1e-7


DEFAULT = NumericConfig()


def rank(M, tol_rank: float = DEFAULT.tol_rank) -> int:
    """Numerical rank: singular values above ``tol_rank * sigma_max``."""
    if tol_rank <= 0:
        raise InputError("tol_rank must be positive")
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol_rank * s[0]))


def spectral_abscissa(A) -> float:
    """Largest real part among the eigenvalues of a square matrix."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[0] != A.shape[1]:
        raise InputError(f"matrix must be square, got {A.shape}")
    try:
        w = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigenvalue iteration failed: {exc}") from None
    return float(np.max(w.real))


def solve_lyapunov(A, Q) -> np.ndarray:
    """Solve ``A' P + P A = -Q`` for symmetric ``P``.

    Uses the vectorised form ``(I kron A' + A' kron I) vec(P) = -vec(Q)``.

    Parameters
    ----------
    A : (n, n) array_like
        Hurwitz matrix.
    Q : (n, n) array_like
        Symmetric positive definite weight.

    Returns
    -------
    P : (n, n) ndarray
        Symmetric positive definite solution.

    Raises
    ------
    NumericError
        If ``A`` is not Hurwitz or the vectorised system is singular.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    n = A.shape[0]
    if A.shape != (n, n) or Q.shape != (n, n):
        raise InputError(f"incompatible shapes A{A.shape}, Q{Q.shape}")
    if spectral_abscissa(A) >= 0:
        raise NumericError("A is not Hurwitz; Lyapunov equation has no PD solution")
    I = np.eye(n)
    K = np.kron(I, A.T) + np.kron(A.T, I)
    # column-major vec
    try:
        p = np.linalg.solve(K, -Q.reshape(-1, order="F"))
    except np.linalg.LinAlgError:
        raise NumericError("singular Lyapunov operator") from None
    P = p.reshape(n, n, order="F")
    return 0.5 * (P + P.T)


def is_positive_definite(P, tol_pd: float = DEFAULT.tol_pd) -> bool:
    """True iff a symmetric-pivoted Cholesky sweep keeps every pivot above ``tol_pd``."""
    P = np.atleast_2d(np.array(P, dtype=float))
    n = P.shape[0]
    if P.shape != (n, n):
        raise InputError(f"matrix must be square, got {P.shape}")
    if not np.allclose(P, P.T, rtol=0.0, atol=1e-10 * max(1.0, np.abs(P).max())):
        raise InputError("matrix is not symmetric")
    S = 0.5 * (P + P.T)
    for k in range(n):
        j = k + int(np.argmax(np.diag(S)[k:]))
        S[[k, j]] = S[[j, k]]
        S[:, [k, j]] = S[:, [j, k]]
        d = S[k, k]
        if not d > tol_pd:
            return False
        S[k + 1:, k + 1:] -= np.outer(S[k + 1:, k], S[k, k + 1:]) / d
    return True


def solve_linear(A, b, tol_rank: float = DEFAULT.tol_rank) -> np.ndarray:
    """Solve ``A x = b`` by LU with partial pivoting.

    Raises :class:`SingularMatrixError` when ``A`` is singular to ``tol_rank``
    (reciprocal condition number below it).
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    if A.shape[0] != A.shape[1] or A.shape[0] != b.shape[0]:
        raise InputError(f"incompatible shapes A{A.shape}, b{b.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0.0 or s[-1] <= tol_rank * s[0]:
        raise SingularMatrixError("matrix is singular to working tolerance")
    return np.linalg.solve(A, b)
