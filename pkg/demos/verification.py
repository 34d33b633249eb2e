"""
Taylor polynomials against splines
===================================

The same problem solved three ways: Taylor order 30, Taylor order 50 and
spline collocation with 30 pieces per half-crack.  The crack opening is
compared on 11 interior points and on a fine grid.
"""

import time

import numpy as np

from stcrack import CrackLoad, FarField, Material, Problem, SurfaceTension
from stcrack.spline import compare, solve_spline
from stcrack.taylor import residual, solve

m = Material(70.0, 0.3)
st = SurfaceTension(0.01, 0.01, 0.01, 0.01, 0.005, 0.005)
p = Problem(m, m, st, FarField(sigma=1.0), CrackLoad(), 1.0)

t0 = time.perf_counter()
t30, t50 = solve(p, 30), solve(p, 50)
sp = solve_spline(p, 30)
print(f"three solves in {time.perf_counter() - t0:.2f} s")

for label, xs in (("11 interior points", np.linspace(-1, 1, 13)[1:-1]), ("401 points", None)):
    a = compare(t30, t50, xs).opening_linf
    b = compare(t30, sp, xs).opening_linf
    print(f"{label:>20}: N=30 vs N=50 {a:.3e}   N=30 vs spline {b:.3e}")

###############################################################################
# The difference is concentrated near the tips, where the slope has a
# boundary layer of width about gamma1 / beta

x = np.array([0.0, 0.5, 0.9, 0.99])
print("\n    x    psi1 N=30   psi1 N=50   psi1 spline")
for xi in x:
    print(f"{xi:5.2f} {np.polyval(t30.b1[::-1], xi):11.5f} {np.polyval(t50.b1[::-1], xi):11.5f} {sp.psi(1, xi)[0]:11.5f}")

###############################################################################
# Residuals shrink with even orders

for N in (20, 30, 40, 50):
    print(f"N={N}: max residual {residual(p, solve(p, N)).max_equation:.3e}")
