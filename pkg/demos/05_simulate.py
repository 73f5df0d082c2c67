"""
Running the switching rule
==========================

The rule picks, at every step, the subsystem that makes the quadratic
Lyapunov function fall fastest. The accumulated cost should stay below
the design bound rho.
"""

import numpy as np

from swaffine.fileio import load_system
from swaffine.model import OutputConstrained
from swaffine.search import grid_search
from swaffine.sim import simulate
from swaffine.synthesis import FitnessConfig, SwitchingRule

sys = load_system("example3")
d = grid_search(sys, FitnessConfig(OutputConstrained([0.0]))).best
traj = simulate(sys, SwitchingRule.from_design(d), d.x0, d.Q, T=10.0, h=1e-4)

print("final error", np.linalg.norm(traj.states[-1] - d.x_star))
print("cost", traj.cost[-1], "bound", d.rho)

# near the target the rule chatters between subsystems
tail = traj.sigma[-20:] + 1
print("last active subsystems", tail)

# a finer step switches more often inside a narrower band
for h in (1e-3, 1e-4):
    s = simulate(sys, SwitchingRule.from_design(d), d.x0, d.Q, T=2.0, h=h).sigma
    print(f"h = {h:g}: {np.count_nonzero(np.diff(s))} switches in 2 s")
