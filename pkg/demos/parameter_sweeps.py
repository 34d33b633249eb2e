"""
Maximal stresses and singularity coefficients along parameter sweeps
====================================================================

Sweeps of the upper Poisson ratio under remote tension and remote shear.
The tension curves are smooth.  Under shear the order-30 solutions are not
converged, which shows up as jumps between neighbouring steps.
"""

import warnings

import numpy as np

from stcrack import CrackLoad, FarField, Material, Problem, SurfaceTension
from stcrack.config import with_parameter
from stcrack.postprocess import fit_singularity, max_stress_scan
from stcrack.taylor import residual, solve

warnings.simplefilter("ignore")
st = SurfaceTension(0.01, 0.01, 0.01, 0.01, 0.005, 0.005)

for label, far in (("tension", FarField(sigma=1.0)), ("shear", FarField(tau=1.0))):
    base = Problem(Material(70.0, 0.3), Material(70.0, 0.3), st, far, CrackLoad(), 1.0)
    print(f"\n{label}:  nu1   max|s22+|   k1        k2        residual")
    for nu1 in np.linspace(0.05, 0.45, 9):
        p = with_parameter(base, "nu1", nu1)
        s = solve(p, 30)
        m = max_stress_scan(p, s)
        f = fit_singularity(p, s)
        r = residual(p, s).max_equation
        print(f"         {nu1:5.2f} {m['s22_plus']:10.4f} {f.k1:9.5f} {f.k2:9.5f} {r:9.2e}")
