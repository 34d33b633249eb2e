"""Interface crack with curvature-dependent surface tension."""

from .model import (
    CrackLoad,
    FarField,
    InvalidMaterialError,
    Material,
    MaterialConstants,
    Problem,
    ProblemError,
    SurfaceTension,
    check_farfield_compatibility,
    derive_material_constants,
)
from .numerics import (
    DomainError,
    IllConditionedError,
    SingularMatrixError,
    cauchy_monomial_closed,
    cauchy_monomial_integral,
    fit_log_basis,
    pv_quadrature_oracle,
    solve_dense,
)
from .postprocess import (
    EnglandReference,
    boundary_stresses,
    crack_opening,
    england_reference,
    evaluate_slopes,
    fit_singularity,
    max_stress_scan,
    pressure_problem,
)
from .spline import compare, solve_spline
from .taylor import TaylorSolution, assemble, residual, solve

__version__ = "0.1.0"
