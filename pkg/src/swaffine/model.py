"""Switched affine system data and the linear maps built from it.

A switched affine system is

    dx/dt = A_s x + b_s,   z = C x,   s in {1, ..., N}

Every downstream routine works with the convexified pair
``A(lam) = sum_i lam_i A_i``, ``b(lam) = sum_i lam_i b_i`` and with the
matrix ``M(x)`` whose i-th column is ``A_i x + b_i``, so that
``M(x) @ lam == A(lam) @ x + b(lam)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import InputError

TOL_SIMPLEX = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SwitchedSystem:
    """N affine subsystems sharing one state space and one output map.

    Parameters
    ----------
    A : array_like, shape (N, n_x, n_x)
    b : array_like, shape (N, n_x)
    C : array_like, shape (n_z, n_x), optional
        Output matrix. Omitted or empty means ``n_z = 0``.
    name : str, optional
    """

    A: np.ndarray
    b: np.ndarray
    C: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        try:
            A = np.asarray(self.A, dtype=float)
            b = np.asarray(self.b, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"system matrices are not numeric: {exc}") from None
        if A.ndim == 2 and A.shape[0] == A.shape[1]:
            # a single subsystem given without the leading axis
            A = A[None]
        if A.ndim != 3 or A.shape[1] != A.shape[2] or A.shape[0] < 1 or A.shape[1] < 1:
            raise InputError(f"A must have shape (N, n_x, n_x), got {A.shape}")
        N, n = A.shape[:2]
        if b.ndim == 1 and N == 1:
            b = b[None]
        if b.shape != (N, n):
            raise InputError(f"b must have shape ({N}, {n}), got {b.shape}")
        if self.C is None or np.size(self.C) == 0:
            C = np.zeros((0, n))
        else:
            C = np.atleast_2d(np.asarray(self.C, dtype=float))
            if C.shape[1] != n:
                raise InputError(f"C must have {n} columns, got shape {C.shape}")
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "b", _frozen(b))
        object.__setattr__(self, "C", _frozen(C))

    @property
    def n_x(self) -> int:
        return self.A.shape[1]

    @property
    def n_z(self) -> int:
        return self.C.shape[0]

    @property
    def N(self) -> int:
        return self.A.shape[0]

    def with_b(self, b) -> "SwitchedSystem":
        """Copy of the system with the affine terms replaced."""
        return SwitchedSystem(self.A, b, self.C, self.name)


def to_simplex(lam, N: Optional[int] = None, tol: float = TOL_SIMPLEX) -> np.ndarray:
    """Validate ``lam`` as a point of the unit simplex and return a clean copy.

    Entries in ``[-tol, 0)`` are clamped to zero and the vector is
    renormalised. The returned array is read-only.
    """
    lam = np.array(lam, dtype=float).ravel()
    if N is not None and lam.size != N:
        raise InputError(f"simplex vector must have length {N}, got {lam.size}")
    if lam.size == 0 or not np.all(np.isfinite(lam)):
        raise InputError("simplex vector must be non-empty and finite")
    if lam.min() < -tol:
        raise InputError(f"simplex vector has negative entry {lam.min():.3g}")
    if abs(lam.sum() - 1.0) > tol:
        raise InputError(f"simplex vector sums to {lam.sum():.12g}, not 1")
    lam = np.clip(lam, 0.0, None)
    lam /= lam.sum()
    lam.setflags(write=False)
    return lam


@dataclass(frozen=True)
class FullState:
    """Goal given as a complete equilibrium state."""

    x_star: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x_star", _frozen(np.ravel(self.x_star)))


@dataclass(frozen=True)
class OutputConstrained:
    """Goal given through ``C x* = z*`` (relaxed by ``eps``) and ``H x* <= g``."""

    z_star: np.ndarray
    H: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None
    eps: float = 1e-2

    def __post_init__(self):
        z = _frozen(np.ravel(self.z_star))
        if z.size < 1:
            raise InputError("output goal needs n_z >= 1")
        if not self.eps > 0:
            raise InputError("eps must be positive")
        if self.H is None or np.size(self.H) == 0:
            H, g = np.zeros((0, 0)), np.zeros(0)
        else:
            H = np.atleast_2d(np.asarray(self.H, dtype=float))
            g = np.ravel(np.asarray(self.g, dtype=float))
            if g.size != H.shape[0]:
                raise InputError(f"H has {H.shape[0]} rows but g has {g.size} entries")
        object.__setattr__(self, "z_star", z)
        object.__setattr__(self, "H", _frozen(H))
        object.__setattr__(self, "g", _frozen(g))

    def check_dims(self, sys: SwitchedSystem) -> None:
        if sys.n_z != self.z_star.size:
            raise InputError(f"z* has length {self.z_star.size}, system has n_z = {sys.n_z}")
        if self.H.shape[0] and self.H.shape[1] != sys.n_x:
            raise InputError(f"H must have {sys.n_x} columns, got {self.H.shape}")


GoalSpec = Union[FullState, OutputConstrained]


def convex_dynamics(sys: SwitchedSystem, lam) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(A(lam), b(lam))``, the lam-weighted sums of the subsystems."""
    lam = np.asarray(lam, dtype=float).ravel()
    if lam.size != sys.N:
        raise InputError(f"lam has length {lam.size}, system has N = {sys.N}")
    return np.tensordot(lam, sys.A, axes=1), lam @ sys.b


def build_M(sys: SwitchedSystem, x) -> np.ndarray:
    """Matrix of shape (n_x, N) whose i-th column is ``A_i x + b_i``."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != sys.n_x:
        raise InputError(f"x has length {x.size}, system has n_x = {sys.n_x}")
    return (sys.A @ x + sys.b).T
