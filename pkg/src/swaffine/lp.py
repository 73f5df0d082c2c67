"""Phase-1 simplex for small feasibility problems ``Aeq x = beq, x >= 0``.

Bland's rule is used for both the entering and the leaving variable, so
the method cannot cycle. Rows are equilibrated (divided by their largest
absolute entry) before the tableau is built; feasibility tolerances refer
to the equilibrated rows.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError, NumericError

log = logging.getLogger(__name__)

MAX_ITER = 100_000
_PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class LpFeasibilityProblem:
    Aeq: np.ndarray
    beq: np.ndarray

    def __post_init__(self):
        Aeq = np.atleast_2d(np.asarray(self.Aeq, dtype=float))
        beq = np.asarray(self.beq, dtype=float).ravel()
        m, n = Aeq.shape
        if m < 1 or n < 1 or beq.size != m:
            raise InputError(f"bad LP shapes Aeq{Aeq.shape}, beq({beq.size},)")
        object.__setattr__(self, "Aeq", Aeq)
        object.__setattr__(self, "beq", beq)


def _equilibrate(Aeq, beq):
    scale = np.maximum(np.abs(Aeq).max(axis=1), np.abs(beq))
    scale[scale == 0.0] = 1.0
    A, b = Aeq / scale[:, None], beq / scale
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0
    return A, b


def _phase_one(A, b, max_iter):
    m, n = A.shape
    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = list(range(n, n + m))
    # reduced costs of min sum(artificials); last entry is -objective
    z = np.concatenate([-A.sum(axis=0), np.zeros(m), [-b.sum()]])
    for _ in range(max_iter):
        entering = np.flatnonzero(z[:-1] < -_PIVOT_TOL)
        if entering.size == 0:
            return T, basis, -z[-1]
        j = int(entering[0])
        col = T[:, j]
        rows = np.flatnonzero(col > _PIVOT_TOL)
        if rows.size == 0:
            # cannot happen for a phase-1 objective bounded below by 0
            raise NumericError("phase-1 simplex reported an unbounded direction")
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-14 * max(1.0, abs(best))]
        i = int(min(ties, key=lambda r: basis[r]))
        T[i] /= T[i, j]
        for r in range(m):
            if r != i and T[r, j] != 0.0:
                T[r] -= T[r, j] * T[i]
        z -= z[j] * T[i]
        basis[i] = j
    raise NumericError(f"phase-1 simplex exceeded {max_iter} iterations")


def solve_feasibility(p: LpFeasibilityProblem, tol_lp: float = 1e-9,
                      max_iter: int = MAX_ITER) -> Optional[np.ndarray]:
    """Find ``x >= 0`` with ``p.Aeq @ x == p.beq``, or return None.

    Infeasibility is declared when the phase-1 objective (sum of artificial
    variables) cannot be driven below ``tol_lp``.
    """
    if tol_lp <= 0:
        raise InputError("tol_lp must be positive")
    A, b = _equilibrate(p.Aeq, p.beq)
    m, n = A.shape
    T, basis, obj = _phase_one(A, b, max_iter)
    if obj > tol_lp:
        return None

    x = np.zeros(n)
    for r, j in enumerate(basis):
        if j < n:
            x[j] = T[r, -1]
    # re-solve on the final basis against the original rows to shed pivot roundoff
    cols = sorted(j for j in basis if j < n)
    if cols:
        xb, *_ = np.linalg.lstsq(A[:, cols], b, rcond=None)
        if xb.min() >= -tol_lp:
            polished = np.zeros(n)
            polished[cols] = xb
            if np.abs(A @ polished - b).max() <= np.abs(A @ x - b).max():
                x = polished
    x = np.clip(x, 0.0, None)

    resid = np.abs(A @ x - b).max()
    if resid > tol_lp * (1.0 + np.abs(b).max()):
        raise NumericError(f"phase-1 point violates constraints by {resid:.3g}")
    return x
