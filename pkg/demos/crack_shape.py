"""
Crack opening under remote tension
==================================

Two identical half-planes, a crack on |x| < 1 and small surface tension on
the faces and on the bonded interface.  The faces open almost like the
classical ellipse; the surface tension only matters close to the tips.
"""

import numpy as np

from stcrack import CrackLoad, FarField, Material, Problem, SurfaceTension
from stcrack.postprocess import boundary_stresses, crack_opening, max_stress_scan
from stcrack.taylor import residual, solve

steel = Material(mu=70.0, nu=0.3)
st = SurfaceTension(g0_plus=0.01, g0_minus=0.01, g1_plus=0.01, g1_minus=0.01, g0_int=0.005, g1_int=0.005)
p = Problem(steel, steel, st, FarField(sigma=1.0), CrackLoad(), half_length=1.0)

# Taylor order 30: 190 unknowns
s = solve(p, 30)
print(f"condition estimate {s.condition_estimate:.3g}")

###############################################################################
# Face displacements against the Griffith ellipse (kappa + 1) sigma / (4 mu)

x = np.linspace(-1, 1, 11)
up, um = crack_opening(s, x)
kappa = 3 - 4 * steel.nu
ellipse = (kappa + 1) / (4 * steel.mu) * np.sqrt(1 - x**2)
print("\n     x      u2+       u2-     ellipse")
for row in zip(x, up, um, ellipse):
    print("{:6.2f} {:9.5f} {:9.5f} {:9.5f}".format(*row))

###############################################################################
# Face stresses are small in the middle and grow towards the tips

xs = np.array([0.0, 0.5, 0.9, 0.99, 0.999])
sig = boundary_stresses(p, s, xs)
print("\n     x    s12+       s22+")
for row in zip(xs, sig["s12_plus"], sig["s22_plus"]):
    print("{:6.3f} {:10.5f} {:10.5f}".format(*row))

m = max_stress_scan(p, s)
print("\nmax |s22+| = {:.4f} at x = {:.6f}".format(m["s22_plus"], m.locations["s22_plus"]))

###############################################################################
# Residual of the original singular equations at off-grid points

r = residual(p, s)
print("equation residuals:", " ".join(f"{v:.2e}" for v in r.equations))
