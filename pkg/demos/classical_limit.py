"""
Small surface tension and the classical interface crack
=======================================================

A uniform pressure T opens the crack.  With no surface tension the faces
follow the classical oscillating solution for a bimaterial crack.  With a
small tension the opening stays close to it away from the tips.
"""

import numpy as np

from stcrack import Material, SurfaceTension
from stcrack.postprocess import EnglandReference, crack_opening, pressure_problem
from stcrack.taylor import solve

x = np.array([0.0, 0.5, 0.8, 0.9, 0.95])

###############################################################################
# Identical materials: the reference is the Griffith ellipse

m = Material(70.0, 0.3)
ref = EnglandReference.build(m, m, T=1.0)
print("classical midpoint opening", ref.u2_plus(0.0))
for N in (30, 60, 100):
    s = solve(pressure_problem(m, m, SurfaceTension.uniform(0.001), 1.0), N)
    ratio = crack_opening(s, x)[0] / ref.u2_plus(x)
    print(f"N={N:3d} ratio to classical:", " ".join(f"{r:.3f}" for r in ratio))

###############################################################################
# Dissimilar materials and growing surface tension

m1, m2 = Material(70.0, 0.3), Material(80.0, 0.35)
ref = EnglandReference.build(m1, m2, T=1.0)
print(f"\nbimaterial constant alpha = {ref.alpha_e:.5f}, oscillation index = {ref.gamma_e:.5f}")
print("gamma     u2+(0)    u2+(0.8)")
print(f"{'0':>5} {ref.u2_plus(0.0):9.5f} {ref.u2_plus(0.8):9.5f}")
for g in (0.001, 0.01, 0.1, 1.0):
    s = solve(pressure_problem(m1, m2, SurfaceTension.uniform(g), 1.0), 30)
    u = crack_opening(s, np.array([0.0, 0.8]))[0]
    print(f"{g:>5g} {u[0]:9.5f} {u[1]:9.5f}")
