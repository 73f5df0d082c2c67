"""
The polytope of mixing weights
==============================

Holding one point usually leaves freedom in the weights. The set of valid
weights is a polytope; its vertices are found by sweeping supports.
"""

from swaffine.equilibrium import enumerate_vertices
from swaffine.fileio import load_system

for name in ("example2", "example2_s4", "example2_s0"):
    poly = enumerate_vertices(load_system(name), [0.0, 0.0])
    print(f"{name}: {len(poly)} vertices")
    for v, s in zip(poly.vertices, poly.supports):
        print("   ", v, "support", [i + 1 for i in s])
    print("    centroid", poly.centroid)
