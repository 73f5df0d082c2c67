"""Equilibrium points of a switched affine system for a fully known goal.

``x`` is a Filippov equilibrium when some simplex vector ``lam`` satisfies
``M(x) @ lam = 0``. Deciding that is a linear feasibility problem; the set
of all such ``lam`` is a polytope whose vertices are found by sweeping the
faces of the simplex in order of increasing dimension.

Subsystem indices are 0-based throughout this module. A face of the
simplex is encoded by its *support*: the sorted tuple of indices allowed
to be nonzero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .lp import LpFeasibilityProblem, solve_feasibility
from .model import SwitchedSystem, build_M, to_simplex
from .numerics import DEFAULT, NumericConfig, rank

log = logging.getLogger(__name__)

FaceSupport = tuple


@dataclass(frozen=True)
class ConstantEquilibrium:
    """Equilibrium of subsystem ``index`` used alone.

    When ``A_i`` is singular but ``b_i`` lies in its range the equilibria
    form an affine family; ``affine_family`` is set and ``x`` is just the
    minimum-norm member.
    """

    index: int
    x: np.ndarray
    affine_family: bool = False


@dataclass(frozen=True)
class EquilibriumCertificate:
    x_star: np.ndarray
    lam: np.ndarray
    residual: float


@dataclass(frozen=True)
class EquilibriumPolytope:
    x_star: np.ndarray
    vertices: list = field(default_factory=list)
    supports: list = field(default_factory=list)

    def __len__(self):
        return len(self.vertices)

    @property
    def centroid(self) -> Optional[np.ndarray]:
        if not self.vertices:
            return None
        return np.mean(self.vertices, axis=0)


def constant_equilibria(sys: SwitchedSystem,
                        config: NumericConfig = DEFAULT) -> list[ConstantEquilibrium]:
    """Equilibria reachable with a constant switching signal."""
    out = []
    for i in range(sys.N):
        A, b = sys.A[i], sys.b[i]
        if rank(A, config.tol_rank) == sys.n_x:
            out.append(ConstantEquilibrium(i, -np.linalg.solve(A, b)))
            continue
        x, *_ = np.linalg.lstsq(A, -b, rcond=None)
        if np.abs(A @ x + b).max() <= config.cert_tol * max(1.0, np.abs(b).max()):
            out.append(ConstantEquilibrium(i, x, affine_family=True))
    return out


def screen_candidate(sys: SwitchedSystem, x, config: NumericConfig = DEFAULT) -> bool:
    """Cheap necessary test: False means ``x`` is certainly not an equilibrium.

    ``M(x)`` with a trivial null space cannot annihilate any simplex vector.
    """
    return rank(build_M(sys, x), config.tol_rank) < sys.N


def _restricted_lp(M, support, tol_lp):
    Msub = M[:, list(support)]
    Aeq = np.vstack([Msub, np.ones((1, len(support)))])
    beq = np.zeros(Aeq.shape[0])
    beq[-1] = 1.0
    return solve_feasibility(LpFeasibilityProblem(Aeq, beq), tol_lp)


def _embed(sub, support, N):
    lam = np.zeros(N)
    lam[list(support)] = sub
    return lam


def check_membership(sys: SwitchedSystem, x,
                     config: NumericConfig = DEFAULT) -> Optional[EquilibriumCertificate]:
    """Certificate that ``x`` is a Filippov equilibrium, or None."""
    x = np.asarray(x, dtype=float).ravel()
    if not screen_candidate(sys, x, config):
        return None
    M = build_M(sys, x)
    sol = _restricted_lp(M, range(sys.N), config.tol_lp)
    if sol is None:
        return None
    lam = to_simplex(sol, sys.N, config.tol_simplex)
    residual = float(np.abs(M @ lam).max())
    if residual > config.cert_tol:
        log.warning("LP point at x=%s has residual %.3g above cert_tol", x, residual)
        return None
    return EquilibriumCertificate(x, lam, residual)


def enumerate_vertices(sys: SwitchedSystem, x,
                       config: NumericConfig = DEFAULT) -> EquilibriumPolytope:
    """All vertices of the polytope of simplex vectors associated with ``x``.

    Faces are visited by increasing support size. A feasible face yields a
    vertex (it is the unique feasible point there, since any feasible
    segment on the face would have produced a smaller-support vertex
    earlier), and every larger face containing it is skipped.
    """
    x = np.asarray(x, dtype=float).ravel()
    if check_membership(sys, x, config) is None:
        return EquilibriumPolytope(x)
    M = build_M(sys, x)
    N = sys.N
    vertices, supports = [], []
    for size in range(1, N + 1):
        found = list(supports)  # barrier: prune only with earlier levels
        for S in combinations(range(N), size):
            if any(set(F) <= set(S) for F in found):
                continue
            sub = _restricted_lp(M, S, config.tol_lp)
            if sub is None:
                continue
            lam = to_simplex(_embed(sub, S, N), N, config.tol_simplex)
            if np.abs(M @ lam).max() > config.cert_tol:
                continue
            dup = next((k for k, v in enumerate(vertices)
                        if np.abs(v - lam).max() <= 1e-7), None)
            if dup is not None:
                log.warning("vertex on support %s duplicates support %s", S, supports[dup])
                continue
            vertices.append(lam)
            supports.append(S)
    return EquilibriumPolytope(x, vertices, supports)
