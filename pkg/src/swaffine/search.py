"""Global searches over the simplex for a stabilisable equilibrium.

Two strategies minimise :func:`~swaffine.synthesis.fitness`:

* :func:`grid_search` evaluates every composition ``k / m`` of the simplex
  and then re-grids shrinking copies of the simplex centred on the
  incumbent. It is deterministic.
* :func:`ga_search` is a genetic algorithm whose operators never leave the
  simplex (Dirichlet sampling, convex blending, Dirichlet perturbation).

:func:`constraint_line_sweep` evaluates the best guaranteed cost for fully
specified goals along an output-constraint line, for cross-checking.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from .equilibrium import check_membership, enumerate_vertices
from .errors import ConfigError, InputError
from .model import FullState, OutputConstrained, SwitchedSystem
from .synthesis import DesignResult, FitnessConfig, certify, fitness

MAX_EVALUATIONS = 10**7


def default_workers() -> int:
    """Thread count for fitness batches, from ``SWAFFINE_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("SWAFFINE_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class GridSearchConfig:
    resolution: int = 40
    refine_steps: int = 10
    refine_shrink: float = 0.5

    def __post_init__(self):
        if self.resolution < 1:
            raise ConfigError("grid resolution must be >= 1")
        if self.refine_steps < 0:
            raise ConfigError("refine_steps must be >= 0")
        if not 0 < self.refine_shrink < 1:
            raise ConfigError("refine_shrink must lie in (0, 1)")


@dataclass(frozen=True)
class GaConfig:
    """Genetic-algorithm settings.

    A child is mutated with probability ``mutation_rate`` by blending it
    toward a uniform Dirichlet draw with weight ``mutation_scale * U(0, 1)``.
    """

    population_size: int = 200
    max_generations: int = 100
    elite_count: int = 2
    tournament_size: int = 3
    crossover_rate: float = 0.9
    mutation_rate: float = 0.5
    mutation_scale: float = 0.1
    rng_seed: int = 0
    stall_generations: int = 20

    def __post_init__(self):
        if self.population_size < 2:
            raise ConfigError("population_size must be >= 2")
        if not 0 <= self.elite_count < self.population_size:
            raise ConfigError("elite_count must lie in [0, population_size)")
        if self.tournament_size < 1:
            raise ConfigError("tournament_size must be >= 1")
        if not 0 <= self.mutation_scale <= 1:
            raise ConfigError("mutation_scale must lie in [0, 1]")


@dataclass
class SearchReport:
    best: Optional[DesignResult]
    best_fitness: float
    best_lam: np.ndarray
    history: list = field(default_factory=list)
    evaluations: int = 0
    wall_time_seconds: float = 0.0
    first_feasible_evaluation: Optional[int] = None


class _Evaluator:
    """Counts evaluations and remembers when the first feasible one happened."""

    def __init__(self, sys, config, workers):
        self.sys, self.config = sys, config
        self.workers = workers or default_workers()
        self.count = 0
        self.first_feasible = None

    def __call__(self, points) -> np.ndarray:
        if self.workers > 1 and len(points) > 1:
            with ThreadPoolExecutor(self.workers) as ex:
                values = list(ex.map(lambda p: fitness(self.sys, p, self.config), points))
        else:
            values = [fitness(self.sys, p, self.config) for p in points]
        values = np.asarray(values, dtype=float)
        if self.first_feasible is None:
            ok = np.flatnonzero(values < self.config.mu)
            if ok.size:
                self.first_feasible = self.count + int(ok[0]) + 1
        self.count += len(values)
        return values


def simplex_grid(N: int, m: int) -> np.ndarray:
    """All points ``k / m`` of the simplex with integer ``k >= 0`` summing to ``m``."""
    pts = []
    for bars in combinations(range(m + N - 1), N - 1):
        edges = (-1,) + bars + (m + N - 1,)
        pts.append([edges[i + 1] - edges[i] - 1 for i in range(N)])
    return np.asarray(pts, dtype=float) / m


def _report(sys, config, lam, value, history, ev, t0):
    best = certify(sys, lam, config) if value < config.mu else None
    return SearchReport(best, float(value), np.asarray(lam), history, ev.count,
                        time.perf_counter() - t0, ev.first_feasible)


def grid_search(sys: SwitchedSystem, config: FitnessConfig,
                gcfg: GridSearchConfig = GridSearchConfig(),
                workers: Optional[int] = None) -> SearchReport:
    """Exhaustive simplex grid followed by shrinking local re-grids.

    Refinement round ``k`` evaluates ``(1 - s) lam_inc + s g`` for every
    grid point ``g`` with ``s = refine_shrink ** k``; the neighbourhood is a
    scaled copy of the simplex that contains the incumbent and stays in it.
    """
    t0 = time.perf_counter()
    config = config.resolve(sys)
    n_points = math.comb(gcfg.resolution + sys.N - 1, sys.N - 1)
    if n_points * (1 + gcfg.refine_steps) > MAX_EVALUATIONS:
        raise ConfigError(f"grid search would need {n_points * (1 + gcfg.refine_steps)} "
                          f"evaluations (limit {MAX_EVALUATIONS})")
    grid = simplex_grid(sys.N, gcfg.resolution)
    ev = _Evaluator(sys, config, workers)
    values = ev(grid)
    k = int(np.argmin(values))
    lam, best = grid[k], values[k]
    history = [float(best)]
    for r in range(1, gcfg.refine_steps + 1):
        s = gcfg.refine_shrink ** r
        pts = (1.0 - s) * lam + s * grid
        values = ev(pts)
        k = int(np.argmin(values))
        if values[k] < best:
            lam, best = pts[k], values[k]
        history.append(float(best))
    return _report(sys, config, lam, best, history, ev, t0)


def _tournament(fit, contenders):
    # contenders: (n, k) indices; winner has lowest fitness, ties to first drawn
    return contenders[np.arange(len(contenders)), np.argmin(fit[contenders], axis=1)]


def ga_search(sys: SwitchedSystem, config: FitnessConfig,
              gacfg: GaConfig = GaConfig(),
              workers: Optional[int] = None) -> SearchReport:
    """Genetic algorithm on the simplex, lower fitness is better.

    All random draws of a generation are taken from the seeded stream
    before any fitness is evaluated, so results depend only on the seed.
    """
    t0 = time.perf_counter()
    config = config.resolve(sys)
    rng = np.random.default_rng(gacfg.rng_seed)
    N, n_pop, n_elite = sys.N, gacfg.population_size, gacfg.elite_count
    ev = _Evaluator(sys, config, workers)

    pop = rng.dirichlet(np.ones(N), size=n_pop)
    fit = ev(pop)
    best = float(fit.min())
    history = [best]
    stall = 0
    n_child = n_pop - n_elite
    for _ in range(gacfg.max_generations):
        contenders = rng.integers(0, n_pop, size=(2, n_child, gacfg.tournament_size))
        do_cross = rng.random(n_child) < gacfg.crossover_rate
        theta = rng.random(n_child)[:, None]
        do_mut = rng.random(n_child) < gacfg.mutation_rate
        step = gacfg.mutation_scale * rng.random(n_child)[:, None]
        noise = rng.dirichlet(np.ones(N), size=n_child)

        a = pop[_tournament(fit, contenders[0])]
        b = pop[_tournament(fit, contenders[1])]
        children = np.where(do_cross[:, None], theta * a + (1.0 - theta) * b, a)
        children = np.where(do_mut[:, None], (1.0 - step) * children + step * noise, children)
        children = np.clip(children, 0.0, None)
        children /= children.sum(axis=1, keepdims=True)

        order = np.argsort(fit, kind="stable")[:n_elite]
        pop = np.vstack([pop[order], children])
        fit = np.concatenate([fit[order], ev(children)])

        gen_best = float(fit.min())
        if gen_best < best:
            best, stall = gen_best, 0
        else:
            stall += 1
        history.append(best)
        if stall >= gacfg.stall_generations:
            break
    k = int(np.argmin(fit))
    return _report(sys, config, pop[k], fit[k], history, ev, t0)


def line_points(sys: SwitchedSystem, goal: OutputConstrained, axis: int,
                lo: float, hi: float, steps: int, tol: float = 1e-9):
    """Points of ``{x : C x = z*}`` with coordinate ``axis`` swept over ``[lo, hi]``.

    The remaining coordinates come from a least-squares solve of the output
    equation; ``None`` marks values for which the line has no point.
    """
    if not 0 <= axis < sys.n_x:
        raise InputError(f"axis {axis} out of range for n_x = {sys.n_x}")
    goal.check_dims(sys)
    others = [j for j in range(sys.n_x) if j != axis]
    coords = np.linspace(lo, hi, steps)
    out = []
    for t in coords:
        x = np.zeros(sys.n_x)
        x[axis] = t
        rhs = goal.z_star - sys.C[:, axis] * t
        if others:
            y, *_ = np.linalg.lstsq(sys.C[:, others], rhs, rcond=None)
            x[others] = y
        ok = np.abs(sys.C @ x - goal.z_star).max() <= tol * (1 + np.abs(goal.z_star).max())
        out.append((float(t), x if ok else None))
    return out


def best_design_at(sys: SwitchedSystem, x, config: FitnessConfig) -> Optional[DesignResult]:
    """Lowest-cost design whose equilibrium is exactly ``x``.

    Candidates are the vertices of the associated polytope and its centroid.
    """
    config = config.resolve(sys)
    tol = config.numeric
    goal = config.goal
    if isinstance(goal, OutputConstrained) and goal.H.shape[0]:
        if (goal.H @ x - goal.g).max() > tol.cert_tol:
            return None
    if check_membership(sys, x, tol) is None:
        return None
    poly = enumerate_vertices(sys, x, tol)
    full = FitnessConfig(FullState(x), config.x0, config.Q, config.mu,
                         config.lyap_delta, tol)
    best = None
    for lam in list(poly.vertices) + [poly.centroid]:
        d = certify(sys, lam, full)
        if d is not None and (best is None or d.rho < best.rho):
            best = d
    return best


def constraint_line_sweep(sys: SwitchedSystem, config: FitnessConfig, axis: int,
                          lo: float, hi: float, steps: int) -> list:
    """Guaranteed cost along the output line, as ``(coordinate, rho or None)`` pairs."""
    if not isinstance(config.goal, OutputConstrained):
        raise InputError("line sweep needs an output-constrained goal")
    if steps < 1:
        raise InputError("steps must be >= 1")
    config = config.resolve(sys)
    out = []
    for t, x in line_points(sys, config.goal, axis, lo, hi, steps):
        d = None if x is None else best_design_at(sys, x, config)
        out.append((t, None if d is None else d.rho))
    return out
