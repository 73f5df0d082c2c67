"""Command-line front end.

Exit codes: 0 success, 1 infeasible / nothing found, 2 input error,
3 runtime failure (divergence or numerical breakdown).

Subsystem indices and state coordinates are 1-based on the command line
and in reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .equilibrium import check_membership, constant_equilibria, enumerate_vertices
from .errors import ConfigError, DivergenceError, InputError, NumericError
from .fileio import SCHEMA, atomic_write, csv_text, dumps_report, load_system, system_to_dict
from .model import FullState, OutputConstrained
from .numerics import NumericConfig, is_positive_definite
from .search import (GaConfig, GridSearchConfig, best_design_at, constraint_line_sweep,
                     ga_search, grid_search)
from .sim import simulate
from .synthesis import FitnessConfig, SwitchingRule

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_RUNTIME = 0, 1, 2, 3


def parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.replace(" ", "").split(",") if v != ""])
    except ValueError:
        raise InputError(f"cannot parse vector {text!r}") from None


def parse_matrix(text: str) -> np.ndarray:
    rows = [parse_vector(r) for r in text.split(";")]
    if len({r.size for r in rows}) != 1:
        raise InputError(f"ragged matrix {text!r}")
    return np.array(rows)


def _sized(vec, n, what):
    if vec.size != n:
        raise InputError(f"{what} has length {vec.size}, expected {n}")
    return vec


def design_dict(d) -> dict:
    return {"lam": d.lam, "x_star": d.x_star, "P": d.P, "rho": d.rho, "Q": d.Q, "x0": d.x0}


def search_dict(r, timing=False) -> dict:
    out = {"best_fitness": r.best_fitness, "best_lam": r.best_lam, "history": r.history,
           "evaluations": r.evaluations,
           "first_feasible_evaluation": r.first_feasible_evaluation}
    if timing:
        out["wall_time_seconds"] = r.wall_time_seconds
    return out


def _numeric(args) -> NumericConfig:
    return NumericConfig(tol_lp=args.tol_lp, cert_tol=args.cert_tol)


def _report(args, system, inputs, config, results) -> dict:
    return {"schema": SCHEMA, "version": __version__, "command": args.command,
            "system": system_to_dict(system), "inputs": inputs, "config": config,
            "results": results}


def _emit(args, report):
    text = dumps_report(report)
    if getattr(args, "report", None):
        atomic_write(args.report, text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    system = load_system(args.system)
    x = _sized(parse_vector(args.x), system.n_x, "--x")
    tol = _numeric(args)
    cert = check_membership(system, x, tol)
    constant = [{"index": c.index + 1, "x": c.x, "affine_family": c.affine_family}
                for c in constant_equilibria(system, tol)]
    results = {"feasible": cert is not None,
               "lam": None if cert is None else cert.lam,
               "residual": None if cert is None else cert.residual,
               "constant_equilibria": constant}
    _emit(args, _report(args, system, {"x": x}, {"tol_lp": tol.tol_lp, "cert_tol": tol.cert_tol},
                        results))
    return EXIT_OK if cert is not None else EXIT_INFEASIBLE


def cmd_vertices(args) -> int:
    system = load_system(args.system)
    x = _sized(parse_vector(args.x), system.n_x, "--x")
    tol = _numeric(args)
    poly = enumerate_vertices(system, x, tol)
    pairs = sorted(zip((v.tolist() for v in poly.vertices), poly.supports))
    results = {"feasible": len(pairs) > 0,
               "vertices": [v for v, _ in pairs],
               "supports": [[i + 1 for i in s] for _, s in pairs]}
    _emit(args, _report(args, system, {"x": x}, {"tol_lp": tol.tol_lp, "cert_tol": tol.cert_tol},
                        results))
    return EXIT_OK if pairs else EXIT_INFEASIBLE


def _goal(args, system):
    kind, _, value = args.goal.partition(":")
    if kind == "full":
        return FullState(_sized(parse_vector(value), system.n_x, "full goal"))
    if kind == "output":
        H = parse_matrix(args.H) if args.H else None
        g = parse_vector(args.g) if args.g else None
        if (H is None) != (g is None):
            raise InputError("--H and --g must be given together")
        goal = OutputConstrained(parse_vector(value), H, g, args.eps)
        goal.check_dims(system)
        return goal
    raise InputError(f"--goal must be full:<x*> or output:<z*>, got {args.goal!r}")


def _fitness_config(args, system, goal=None):
    n = system.n_x
    Q = None
    if args.q:
        Q = parse_matrix(args.q)
        if Q.shape == (1, 1) and n > 1:
            Q = Q[0, 0] * np.eye(n)
    x0 = _sized(parse_vector(args.x0), n, "--x0") if args.x0 else None
    goal = goal if goal is not None else _goal(args, system)
    return FitnessConfig(goal, x0, Q, lyap_delta=args.lyap_delta,
                         numeric=_numeric(args)).resolve(system)


def cmd_design(args) -> int:
    system = load_system(args.system)
    cfg = _fitness_config(args, system)
    config = {"goal": args.goal, "H": args.H, "g": args.g, "eps": args.eps, "Q": cfg.Q,
              "x0": cfg.x0, "lyap_delta": cfg.lyap_delta, "mu": cfg.mu, "method": args.method}
    results = {}
    if isinstance(cfg.goal, FullState):
        config["method"] = "polytope"
        design = best_design_at(system, cfg.goal.x_star, cfg)
    elif args.method == "grid":
        gcfg = GridSearchConfig(args.resolution, args.refine_steps, args.refine_shrink)
        config["grid"] = vars(gcfg)
        report = grid_search(system, cfg, gcfg)
        design = report.best
        results["search"] = search_dict(report, args.timing)
    else:
        runs = []
        seeds = [args.seed + k for k in range(args.repeat)]
        best_report = None
        for seed in seeds:
            gacfg = GaConfig(args.population, args.generations, args.elite, args.tournament,
                             args.crossover_rate, args.mutation_rate, args.mutation_scale,
                             seed, args.stall)
            report = ga_search(system, cfg, gacfg)
            runs.append(report)
            if best_report is None or report.best_fitness < best_report.best_fitness:
                best_report = report
        config["ga"] = {**vars(gacfg), "rng_seed": args.seed, "repeat": args.repeat}
        design = best_report.best
        results["search"] = search_dict(best_report, args.timing)
        if args.repeat > 1:
            results["runs"] = [{"seed": s, "best_fitness": r.best_fitness,
                                "first_feasible_evaluation": r.first_feasible_evaluation}
                               for s, r in zip(seeds, runs)]
    results = {"feasible": design is not None,
               "design": None if design is None else design_dict(design), **results}
    _emit(args, _report(args, system, {"system": args.system}, config, results))
    return EXIT_OK if design is not None else EXIT_INFEASIBLE


def _load_design(path, n):
    try:
        doc = json.loads(Path(path).read_text())
        d = doc["results"]["design"]
        P, x_star, Q = (np.array(d[k], dtype=float) for k in ("P", "x_star", "Q"))
        x0 = np.array(d.get("x0", np.ones(n)), dtype=float)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a design report ({exc})") from None
    if P.shape != (n, n) or Q.shape != (n, n) or x_star.shape != (n,):
        raise InputError(f"{path}: design dimensions do not match n_x = {n}")
    try:
        ok = is_positive_definite(P)
    except InputError:
        ok = False
    if not ok:
        raise InputError(f"{path}: P is not symmetric positive definite")
    return P, x_star, Q, x0


def cmd_simulate(args) -> int:
    system = load_system(args.system)
    n = system.n_x
    P, x_star, Q, x0 = _load_design(args.design, n)
    if args.x0:
        x0 = _sized(parse_vector(args.x0), n, "--x0")
    traj = simulate(system, SwitchingRule(P, x_star), x0, Q, args.T, args.h)
    if args.out:
        header = ["t", *(f"x{j + 1}" for j in range(n)), "sigma", "cost"]
        atomic_write(args.out, csv_text(header, traj.rows()))
    e0 = x0 - x_star
    rho = float(e0 @ P @ e0)
    results = {"samples": len(traj.times), "final_state": traj.states[-1],
               "final_error": float(np.linalg.norm(traj.states[-1] - x_star)),
               "cost": float(traj.cost[-1]), "rho": rho,
               "within_bound": bool(traj.cost[-1] <= rho * 1.05)}
    _emit(args, _report(args, system, {"design": args.design, "x0": x0},
                        {"T": args.T, "h": args.h}, results))
    return EXIT_OK


def cmd_sweep(args) -> int:
    system = load_system(args.system)
    lo, hi = parse_vector(args.range)
    args.goal = "output:" + args.z
    args.H = args.g = None
    cfg = _fitness_config(args, system)
    curve = constraint_line_sweep(system, cfg, args.coord - 1, lo, hi, args.steps)
    if args.out:
        rows = [(t, "" if r is None else r, int(r is not None)) for t, r in curve]
        atomic_write(args.out, csv_text(["coord", "rho", "feasible"], rows))
    feas = [(r, t) for t, r in curve if r is not None]
    best = min(feas) if feas else None
    results = {"coord": [t for t, _ in curve], "rho": [r for _, r in curve],
               "min_rho": None if best is None else best[0],
               "argmin_coord": None if best is None else best[1]}
    _emit(args, _report(args, system, {"z": args.z, "coord": args.coord},
                        {"range": [lo, hi], "steps": args.steps, "Q": cfg.Q, "x0": cfg.x0},
                        results))
    return EXIT_OK if feas else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swaffine", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("system", help="system JSON file or bundled name (e.g. example3)")
        sp.add_argument("--report", help="write the JSON report here instead of stdout")
        sp.add_argument("--tol-lp", type=float, default=1e-9)
        sp.add_argument("--cert-tol", type=float, default=1e-7)

    def cost(sp):
        sp.add_argument("--q", help="cost weight, 'a,b;c,d' or a scalar multiple of I")
        sp.add_argument("--x0", help="initial state, default all ones")
        sp.add_argument("--lyap-delta", type=float, default=1e-6)

    sp = sub.add_parser("check", help="is x a Filippov equilibrium?")
    common(sp)
    sp.add_argument("--x", required=True)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("vertices", help="vertices of the polytope of lam associated with x")
    common(sp)
    sp.add_argument("--x", required=True)
    sp.set_defaults(func=cmd_vertices)

    sp = sub.add_parser("design", help="search an equilibrium and design the switching rule")
    common(sp)
    cost(sp)
    sp.add_argument("--goal", required=True, help="full:<x*> or output:<z*>")
    sp.add_argument("--H", help="output-goal inequality matrix 'a,b;c,d'")
    sp.add_argument("--g", help="output-goal inequality right-hand side")
    sp.add_argument("--eps", type=float, default=1e-2)
    sp.add_argument("--method", choices=("grid", "ga"), default="grid")
    sp.add_argument("--resolution", type=int, default=40)
    sp.add_argument("--refine-steps", type=int, default=10)
    sp.add_argument("--refine-shrink", type=float, default=0.5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--repeat", type=int, default=1, help="GA runs with seeds seed, seed+1, ...")
    sp.add_argument("--population", type=int, default=200)
    sp.add_argument("--generations", type=int, default=100)
    sp.add_argument("--elite", type=int, default=2)
    sp.add_argument("--tournament", type=int, default=3)
    sp.add_argument("--crossover-rate", type=float, default=0.9)
    sp.add_argument("--mutation-rate", type=float, default=GaConfig.mutation_rate)
    sp.add_argument("--mutation-scale", type=float, default=GaConfig.mutation_scale)
    sp.add_argument("--stall", type=int, default=20)
    sp.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    sp.set_defaults(func=cmd_design)

    sp = sub.add_parser("simulate", help="simulate a designed rule and write a CSV trace")
    common(sp)
    sp.add_argument("--design", required=True, help="report written by 'design'")
    sp.add_argument("--x0")
    sp.add_argument("--T", type=float, default=10.0)
    sp.add_argument("--h", type=float, default=1e-4)
    sp.add_argument("--out", help="CSV trace path")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="guaranteed cost along the line C x = z*")
    common(sp)
    cost(sp)
    sp.add_argument("--z", required=True)
    sp.add_argument("--coord", type=int, default=1, help="1-based free coordinate")
    sp.add_argument("--range", required=True, help="lo,hi")
    sp.add_argument("--steps", type=int, default=200)
    sp.add_argument("--eps", type=float, default=1e-2)
    sp.add_argument("--out", help="CSV path (coord,rho,feasible)")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ConfigError) as exc:
        print(f"swaffine: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DivergenceError, NumericError) as exc:
        print(f"swaffine: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
