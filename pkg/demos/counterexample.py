"""A complete Zermelo metric on the disk whose BL metric stays bounded.

The drift is +x on Funk shells and -x on reverse Funk shells, so each band
costs about 1 to cross in either direction while the closed-form BL metric
never degenerates.

Run: python demos/counterexample.py
"""
import numpy as np

from finsler_lab.binet_legendre import zermelo_bl_closed_form
from finsler_lab.bodies import PBall
from finsler_lab.domain_geometry import (
    counterexample_drift,
    counterexample_field,
    counterexample_profile,
    funk_ball_radius,
    path_length,
    radial_path,
)

field = counterexample_field(2)
e = [1.0, 0.0]
print("t      r(t)        phi")
for t in np.arange(0.0, 8.5, 0.5):
    r = funk_ball_radius(t)
    print(f"{t:4.1f}  {r:.8f}  {round(float(counterexample_profile(r)), 4) + 0.0:+.4f}")

print("\nshell crossing costs")
for k in (0, 1):
    out = path_length(field, radial_path(funk_ball_radius(4 * k), funk_ball_radius(4 * k + 1), e))
    back = path_length(field, radial_path(funk_ball_radius(4 * k + 3), funk_ball_radius(4 * k + 2), e))
    print(f"  k={k}: outward {out:.6f}   inward {back:.6f}")

rng = np.random.default_rng(0)
t = rng.uniform(0, 18, 2000)
X = rng.standard_normal((2000, 2))
X *= (-np.expm1(-t) / np.linalg.norm(X, axis=1))[:, None]
w = np.array([np.linalg.eigvalsh(zermelo_bl_closed_form(PBall(2.0, 2), u).metric)
              for u in counterexample_drift(X)])
print(f"\nBL eigenvalues over 2000 points: [{w.min():.6f}, {w.max():.6f}]   floor 1/5 = 0.2")
