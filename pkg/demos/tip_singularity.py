"""
Logarithmic stresses at the crack tip
=====================================

With curvature-dependent surface tension the square-root singularity is
gone.  The face shear stress is expected to grow like ln(t)**2 with the
distance t to the tip while the face normal stress stays bounded.  A
polynomial of order 30 cannot follow the growth inside the tip boundary
layer, so the sampled values level off below t of about gamma1 / beta.
"""

import numpy as np

from stcrack import CrackLoad, FarField, Material, Problem, SurfaceTension
from stcrack.postprocess import boundary_stresses, fit_singularity
from stcrack.taylor import solve

m = Material(70.0, 0.3)
p = Problem(m, m, SurfaceTension(0.01, 0.01, 0.01, 0.01, 0.005, 0.005), FarField(sigma=1.0), CrackLoad(), 1.0)
s = solve(p, 30)

t = np.geomspace(1e-4, 1e-1, 7)
sig = boundary_stresses(p, s, 1.0 - t)
print("   t        s12+       s22+")
for row in zip(t, sig["s12_plus"], sig["s22_plus"]):
    print("{:8.1e} {:10.5f} {:10.5f}".format(*row))

###############################################################################
# Least-squares fit on 1e-3 < t < 1e-1, then on half the window

f = fit_singularity(p, s)
print(f"\nk1 = {f.k1:.5f}  k2 = {f.k2:.5f}")
print(f"half window: k1 = {f.k1_halved:.5f}  k2 = {f.k2_halved:.5f}  (change {f.window_sensitivity:.1%})")
print(f"ln^2 part of s22: {f.s22_log2[0]:.2e}, {f.s22_log2[1]:.2e}  bounded: {f.s22_bounded}")

###############################################################################
# The boundary layer near the tip has width about gamma1 / beta

print(f"gamma1 / beta = {p.st.g1_plus / p.c1.beta:.1e}")
