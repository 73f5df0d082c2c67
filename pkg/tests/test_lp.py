import numpy as np
import pytest
from scipy.optimize import linprog

from swaffine.errors import InputError, NumericError
from swaffine.lp import LpFeasibilityProblem, solve_feasibility
from swaffine.model import build_M
from swaffine.search import simplex_grid

from conftest import planted_system

TOL_LP = 1e-9


def _simplex_lp(M):
    Aeq = np.vstack([M, np.ones((1, M.shape[1]))])
    beq = np.zeros(Aeq.shape[0])
    beq[-1] = 1.0
    return LpFeasibilityProblem(Aeq, beq)


def test_example1_unique_point():
    x = solve_feasibility(LpFeasibilityProblem([[1.0, -1.0], [1.0, 1.0]], [0.0, 1.0]))
    np.testing.assert_allclose(x, [0.5, 0.5], atol=1e-12)


def test_forced_vertex():
    x = solve_feasibility(LpFeasibilityProblem([[1.0, 1.0], [1.0, 0.0]], [1.0, 0.0]))
    np.testing.assert_allclose(x, [0.0, 1.0], atol=1e-12)


def test_example2_face(ex2):
    # face lam_2 = lam_4 = 0 realised by deleting those variables
    M = build_M(ex2, [0.0, 0.0])[:, [0, 2]]
    x = solve_feasibility(_simplex_lp(M))
    np.testing.assert_allclose(x, [0.5, 0.5], atol=1e-12)


def test_infeasible_and_errors():
    assert solve_feasibility(LpFeasibilityProblem([[1.0, 1.0]], [-1.0])) is None
    assert solve_feasibility(_simplex_lp(np.array([[1.0, 2.0, 3.0]]))) is None
    with pytest.raises(InputError):
        solve_feasibility(LpFeasibilityProblem([[1.0]], [1.0]), tol_lp=0.0)
    with pytest.raises(InputError):
        LpFeasibilityProblem(np.zeros((2, 2)), np.zeros(3))
    with pytest.raises(NumericError):
        solve_feasibility(LpFeasibilityProblem([[1.0, -1.0], [1.0, 1.0]], [0.0, 1.0]), max_iter=0)


def test_degenerate_cycling_prone_instance():
    # Beale-type degenerate rows; Bland's rule must terminate
    Aeq = np.array([[0.25, -8.0, -1.0, 9.0, 1.0, 0.0, 0.0],
                    [0.5, -12.0, -0.5, 3.0, 0.0, 1.0, 0.0],
                    [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]])
    x = solve_feasibility(LpFeasibilityProblem(Aeq, [0.0, 0.0, 1.0]))
    assert x is not None and x.min() >= 0
    np.testing.assert_allclose(Aeq @ x, [0.0, 0.0, 1.0], atol=1e-12)


GRID = 200


def _grid(N, m=GRID):
    return simplex_grid(N, m)


def _grid_oracle(M, grid):
    # feasible iff some grid point nearly annihilates M (planted points lie on the grid)
    return float(np.abs(grid @ M.T).max(axis=1).min()) < 10 * TOL_LP


def _planted_instance(rng, feasible):
    N = int(rng.integers(2, 5))
    n = int(rng.integers(1, 4))
    R = rng.normal(size=(n, N))
    if feasible:
        lam = rng.multinomial(GRID, np.ones(N) / N) / GRID
        M = R - np.outer(R @ lam, np.ones(N))
    else:
        M = R
        M[0] = np.abs(M[0]) + 0.05 + rng.random()  # row strictly positive on the simplex
        if rng.random() < 0.5:
            M[0] *= -1
    return M


def test_membership_agrees_with_grid_oracle(rng):
    grids = {N: _grid(N) for N in range(2, 5)}
    agree = 0
    for k in range(120):
        M = _planted_instance(rng, feasible=k % 2 == 0)
        truth = _grid_oracle(M, grids[M.shape[1]])
        assert truth == (k % 2 == 0)
        x = solve_feasibility(_simplex_lp(M), TOL_LP)
        assert (x is not None) == truth
        if x is not None:
            assert np.abs(M @ x).max() <= 1e-9 * (1 + np.abs(M).max())
            assert x.sum() == pytest.approx(1.0, abs=1e-9)
        agree += 1
    assert agree == 120


def test_agrees_with_scipy_linprog(rng):
    for _ in range(100):
        m, n = int(rng.integers(1, 4)), int(rng.integers(1, 7))
        Aeq = rng.normal(size=(m, n))
        if rng.random() < 0.5:
            beq = Aeq @ rng.random(n)
        else:
            beq = rng.normal(size=m)
        ref = linprog(np.zeros(n), A_eq=Aeq, b_eq=beq, bounds=(0, None), method="highs")
        x = solve_feasibility(LpFeasibilityProblem(Aeq, beq))
        assert (x is not None) == (ref.status == 0)
        if x is not None:
            np.testing.assert_allclose(Aeq @ x, beq, atol=1e-9 * (1 + np.abs(Aeq).max()))


def test_planted_systems_are_feasible(rng):
    for _ in range(20):
        sys, lam = planted_system(rng, 2, 5)
        x = solve_feasibility(_simplex_lp(build_M(sys, np.zeros(2))))
        assert x is not None
