"""
Which states can be held at rest?
=================================

A state is an equilibrium of the convexified dynamics when some mix of the
subsystem vector fields cancels there. That is a small LP.
"""

import numpy as np

from swaffine.equilibrium import check_membership, constant_equilibria
from swaffine.fileio import load_system

# two integrators drifting in opposite directions: any point can be held
sys1 = load_system("example1")
for x in (-3.0, 0.0, 7.0):
    cert = check_membership(sys1, [x])
    print(f"x = {x:5.1f}  lam = {cert.lam}")

# none of the subsystems has an equilibrium of its own
print("constant equilibria:", constant_equilibria(sys1))

# three stable subsystems in the plane: only a bounded set is reachable
sys3 = load_system("example3")
for x in ([-0.0854, 0.0], [10.0, 10.0]):
    cert = check_membership(sys3, x)
    print(x, "->", None if cert is None else np.round(cert.lam, 4))
