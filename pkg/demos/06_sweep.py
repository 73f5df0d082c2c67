"""
Cost along the output line
==========================

Fix x2 = 0 and slide x1. At every point with valid weights, design the
best rule for that exact equilibrium and record its cost.
"""

from swaffine.fileio import load_system
from swaffine.model import OutputConstrained
from swaffine.search import constraint_line_sweep
from swaffine.synthesis import FitnessConfig

sys = load_system("example3")
curve = constraint_line_sweep(sys, FitnessConfig(OutputConstrained([0.0])), 0, -1.5, 1.0, 200)

feasible = [(t, r) for t, r in curve if r is not None]
print(f"{len(feasible)} of {len(curve)} points reachable,"
      f" x1 in [{feasible[0][0]:.3f}, {feasible[-1][0]:.3f}]")
t, r = min(feasible, key=lambda p: p[1])
print(f"cheapest x1 = {t:.4f}, rho = {r:.4f}")

# crude text plot
for t, r in feasible[::4]:
    print(f"{t:7.3f} " + "#" * int(min(r, 2.0) * 30))
