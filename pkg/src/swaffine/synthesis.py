"""Stabilising design for a fixed convex combination ``lam``.

For fixed ``lam`` with ``A(lam)`` Hurwitz, the smallest guaranteed cost
``(x0 - x*)' P (x0 - x*)`` over all ``P`` with ``A' P + P A < -Q`` is
approached by the Lyapunov solution of ``A' P + P A = -(Q + delta I)``,
because the Lyapunov map is monotone in its right-hand side. That closed
form replaces an LMI solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError, SingularMatrixError
from .model import (FullState, GoalSpec, OutputConstrained, SwitchedSystem,
                    convex_dynamics, to_simplex)
from .numerics import DEFAULT, NumericConfig, solve_linear, solve_lyapunov, spectral_abscissa

MU = 1e5
V_SING = 10.0


@dataclass(frozen=True)
class FitnessConfig:
    """Everything the fitness of a single ``lam`` depends on.

    ``Q`` defaults to the identity and ``x0`` to the all-ones vector once
    the state dimension is known (see :meth:`resolve`).
    """

    goal: GoalSpec
    x0: Optional[np.ndarray] = None
    Q: Optional[np.ndarray] = None
    mu: float = MU
    lyap_delta: float = 1e-6
    numeric: NumericConfig = DEFAULT

    def resolve(self, sys: SwitchedSystem) -> "FitnessConfig":
        n = sys.n_x
        x0 = np.ones(n) if self.x0 is None else np.asarray(self.x0, dtype=float).ravel()
        Q = np.eye(n) if self.Q is None else np.atleast_2d(np.asarray(self.Q, dtype=float))
        if x0.size != n or Q.shape != (n, n):
            raise InputError(f"x0/Q do not match n_x = {n}")
        if not self.mu > 0:
            raise InputError("mu must be positive")
        if not np.allclose(Q, Q.T) or np.linalg.eigvalsh(Q).min() <= 0:
            raise InputError("Q must be symmetric positive definite")
        if isinstance(self.goal, OutputConstrained):
            self.goal.check_dims(sys)
        elif self.goal.x_star.size != n:
            raise InputError(f"x* has length {self.goal.x_star.size}, expected {n}")
        return FitnessConfig(self.goal, x0, Q, self.mu, self.lyap_delta, self.numeric)


@dataclass(frozen=True)
class DesignResult:
    lam: np.ndarray
    x_star: np.ndarray
    P: np.ndarray
    rho: float
    Q: np.ndarray
    x0: np.ndarray


@dataclass(frozen=True)
class SwitchingRule:
    """``u(x) = argmin_i (x - x*)' P (A_i x + b_i)``, ties to the lowest index."""

    P: np.ndarray
    x_star: np.ndarray
    tie_break: str = field(default="lowest-index")

    @classmethod
    def from_design(cls, d: DesignResult) -> "SwitchingRule":
        return cls(d.P, d.x_star)


def equilibrium_of(sys: SwitchedSystem, lam,
                   config: NumericConfig = DEFAULT) -> Optional[np.ndarray]:
    """The unique ``x*`` with ``A(lam) x* + b(lam) = 0``, or None if ``A(lam)`` is singular."""
    A, b = convex_dynamics(sys, lam)
    try:
        return -solve_linear(A, b, config.tol_rank)
    except SingularMatrixError:
        return None


def _goal_violation(sys, goal, A, b, x, cert_tol):
    """Largest constraint violation of the goal at ``x`` (<= 0 means met)."""
    if isinstance(goal, FullState):
        return np.abs(A @ goal.x_star + b).max() - cert_tol
    v = np.abs(sys.C @ x - goal.z_star).max() - goal.eps
    if goal.H.shape[0]:
        v = max(v, (goal.H @ x - goal.g).max() - cert_tol)
    return v


def certify(sys: SwitchedSystem, lam, config: FitnessConfig) -> Optional[DesignResult]:
    """Closed-form design for ``lam``; None when ``lam`` is not admissible."""
    config = config.resolve(sys) if config.Q is None or config.x0 is None else config
    tol = config.numeric
    lam = to_simplex(lam, sys.N, tol.tol_simplex)
    A, b = convex_dynamics(sys, lam)
    if spectral_abscissa(A) >= 0:
        return None
    x = equilibrium_of(sys, lam, tol)
    if x is None:
        return None
    if _goal_violation(sys, config.goal, A, b, x, tol.cert_tol) > 0:
        return None
    if isinstance(config.goal, FullState):
        x = np.array(config.goal.x_star)
    n = sys.n_x
    P = solve_lyapunov(A, config.Q + config.lyap_delta * np.eye(n))
    e = config.x0 - x
    return DesignResult(lam, x, P, float(e @ P @ e), config.Q, config.x0)


def fitness(sys: SwitchedSystem, lam, config: FitnessConfig) -> float:
    """Guaranteed cost if ``lam`` is admissible, else ``mu`` plus the worst violation."""
    config = config.resolve(sys) if config.Q is None or config.x0 is None else config
    tol = config.numeric
    lam = to_simplex(lam, sys.N, tol.tol_simplex)
    A, b = convex_dynamics(sys, lam)
    abscissa = spectral_abscissa(A)
    x = equilibrium_of(sys, lam, tol)
    if x is None:
        return config.mu + max(abscissa, V_SING, 0.0)
    violation = _goal_violation(sys, config.goal, A, b, x, tol.cert_tol)
    if abscissa < 0 and violation <= 0:
        d = certify(sys, lam, config)
        if d is not None:
            return d.rho
    return config.mu + max(abscissa, violation, 0.0)


def switching_index(rule: SwitchingRule, sys: SwitchedSystem, x) -> int:
    """0-based index of the subsystem selected by the min-type rule at ``x``."""
    x = np.asarray(x, dtype=float)
    values = (sys.A @ x + sys.b) @ (rule.P @ (x - rule.x_star))
    return int(np.argmin(values))
