"""John ellipsoids and Binet-Legendre metrics of a few unit balls.

Run: python demos/john_and_bl.py
"""
import math

import numpy as np

from finsler_lab.binet_legendre import bl_metric, busemann_densities
from finsler_lab.bodies import PBall, PolytopeH, PolytopeV, Translate
from finsler_lab.john import pball_john_radius, max_inscribed_ellipsoid

square = PolytopeH(np.vstack([np.eye(2), -np.eye(2)]), np.ones(4))
triangle = PolytopeV([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])

print("John radius of the unit p-ball in the plane")
for p in (1.0, 1.2, 1.5, 2.0, 3.0, 6.0):
    r = max_inscribed_ellipsoid(PBall(p, 2)).radius
    print(f"  p={p:<4g} solver {r:.6f}   formula {pball_john_radius(p, 2):.6f}")

print("\nBL metrics")
for name, body in [("disk", PBall(2.0, 2)), ("square", square), ("triangle", triangle)]:
    print(f"  {name:8s}", np.array2string(bl_metric(body).matrix, precision=6).replace("\n", ""))

g = bl_metric(PBall(2.0, 2), "montecarlo", 200_000, seed=1)
print("  disk, Monte-Carlo:", np.array2string(g.matrix, precision=4).replace("\n", ""),
      "+/-", np.array2string(g.stderr, precision=4).replace("\n", ""))

print("\nDensities relative to Busemann")
for name, body in [("square", square), ("funk ball", Translate(PBall(2.0, 2), [-0.5, 0.0]))]:
    d = busemann_densities(body)
    print(f"  {name:10s} John/F {d.john_ratio:.6f} (<= {d.john_upper:g})   BL/F {d.bl_ratio:.6f}")
print(f"  4/pi = {4 / math.pi:.6f}")
