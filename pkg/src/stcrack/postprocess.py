"""
Physical fields from a solved problem: slopes, crack-face displacements,
stresses on y = 0, tip singularity fits and the classical LEFM reference.

Displacements are those of the perturbation field (no remote contribution).
Stresses are total stresses, remote load included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import CrackLoad, Material, Problem, ProblemError, derive_material_constants
from .numerics import (
    DomainError,
    cauchy_monomial_closed,
    cauchy_monomial_integral,
    fit_log_basis,
)
from .taylor import TaylorSolution, negpoly, poly

DEFAULT_WINDOW = (1e-3, 1e-1)
DEFAULT_FIT_SAMPLES = 40


@dataclass(frozen=True, eq=False)
class FieldSample:
    """Fields along y = 0.  Entries outside their region are NaN."""

    x: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    psi1: np.ndarray
    psi2: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    u2_plus: np.ndarray
    u2_minus: np.ndarray
    s12_plus: np.ndarray
    s12_minus: np.ndarray
    s22_plus: np.ndarray
    s22_minus: np.ndarray


def _split(x, l):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) == l):
        raise DomainError("fields are not evaluated at the crack tips |x| = l")
    return x, np.abs(x) < l


def evaluate_slopes(s: TaylorSolution, x) -> dict[str, np.ndarray]:
    """The six slope series at `x`; crack entries are NaN outside, interface entries inside."""
    l = s.half_length
    x, inside = _split(x, l)
    out = {k: np.full(x.shape, np.nan) for k in ("phi1", "phi2", "psi1", "psi2", "phi", "psi")}
    xi, xo = x[inside], x[~inside]
    out["phi1"][inside] = poly(s.a1, xi)
    out["phi2"][inside] = poly(s.a2, xi)
    out["psi1"][inside] = poly(s.b1, xi)
    out["psi2"][inside] = poly(s.b2, xi)
    out["phi"][~inside] = negpoly(s.a3, xo)
    out["psi"][~inside] = negpoly(s.b3, xo)
    return out


def _antiderivative(c, l):
    return np.polynomial.polynomial.polyint(np.asarray(c, dtype=float), lbnd=-l)


def crack_opening(s: TaylorSolution, x) -> tuple[np.ndarray, np.ndarray]:
    """Vertical displacements u2+ and u2- of the faces, anchored to 0 at x = -l."""
    l = s.half_length
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > l):
        raise DomainError("crack_opening needs |x| <= l")
    return poly(_antiderivative(s.b1, l), x), poly(_antiderivative(s.b2, l), x)


def _cauchy(coefs, kind, x, l, powers):
    """Sum of monomial Cauchy integrals; closed forms where the series is slow."""
    ratio = np.abs(x) / l if kind.endswith("_inner") else l / np.abs(x)
    fast = ratio <= 0.9
    out = np.zeros(x.shape)
    for c, k in zip(coefs, powers):
        if c == 0.0:
            continue
        if np.any(fast):
            out[fast] += c * cauchy_monomial_integral(kind, int(k), x[fast], l)
        if np.any(~fast):
            out[~fast] += c * cauchy_monomial_closed(kind, int(k), x[~fast], l)
    return out


def boundary_stresses(p: Problem, s: TaylorSolution, x) -> dict[str, np.ndarray]:
    """Total stresses s12 and s22 on both sides of y = 0.

    On the crack they come from the surface-tension boundary conditions, on
    the interface from the half-plane Dirichlet-to-Neumann maps.
    """
    l = s.half_length
    x, inside = _split(x, l)
    st, ld = p.st, p.load
    out = {k: np.empty(x.shape) for k in ("s12_plus", "s12_minus", "s22_plus", "s22_minus")}

    xi = x[inside]
    out["s12_plus"][inside] = st.g1_plus * poly(s.b1, xi, 2) + poly(ld.f_plus, xi)
    out["s22_plus"][inside] = -st.g0_plus * poly(s.b1, xi, 1) + poly(ld.g_plus, xi)
    out["s12_minus"][inside] = -st.g1_minus * poly(s.b2, xi, 2) + poly(ld.f_minus, xi)
    out["s22_minus"][inside] = st.g0_minus * poly(s.b2, xi, 1) + poly(ld.g_minus, xi)

    xo = x[~inside]
    if xo.size:
        c1, c2 = p.c1, p.c2
        pa = np.arange(len(s.a1))
        pb = np.arange(len(s.b1))
        pn = np.arange(1, len(s.a3) + 1)
        phi, psi = negpoly(s.a3, xo), negpoly(s.b3, xo)
        C_phi = _cauchy(s.a3, "outer_outer", xo, l, pn)
        C_psi = _cauchy(s.b3, "outer_outer", xo, l, pn)
        tau, sig = p.far.tau, p.far.sigma
        out["s12_plus"][~inside] = (
            c1.alpha * psi + c1.beta * (_cauchy(s.a1, "inner_outer", xo, l, pa) + C_phi) + tau
        )
        out["s12_minus"][~inside] = (
            c2.alpha * psi - c2.beta * (_cauchy(s.a2, "inner_outer", xo, l, pa) + C_phi) + tau
        )
        out["s22_plus"][~inside] = (
            -c1.alpha * phi + c1.beta * (_cauchy(s.b1, "inner_outer", xo, l, pb) + C_psi) + sig
        )
        out["s22_minus"][~inside] = (
            -c2.alpha * phi - c2.beta * (_cauchy(s.b2, "inner_outer", xo, l, pb) + C_psi) + sig
        )
    return out


def sample_fields(p: Problem, s: TaylorSolution, x) -> FieldSample:
    l = s.half_length
    x, inside = _split(x, l)
    slopes = evaluate_slopes(s, x)
    up = np.full(x.shape, np.nan)
    um = np.full(x.shape, np.nan)
    up[inside], um[inside] = crack_opening(s, x[inside])
    return FieldSample(x=x, u2_plus=up, u2_minus=um, **slopes, **boundary_stresses(p, s, x))


# -- tip singularities ---------------------------------------------------------


@dataclass(frozen=True)
class SingularityFit:
    """ln**2 fits of the face shear stresses near one tip.

    ``k1``/``k2`` are the ln**2 coefficients of s12+ and s12-; ``c_plus`` and
    ``c_minus`` the constant and ln terms.  ``s22_log2`` holds the ln**2
    coefficients of s22+ and s22-, which should be negligible.  The
    ``*_halved`` entries repeat the shear fit on a window with half the
    outer radius.
    """

    tip: float
    k1: float
    k2: float
    c_plus: tuple[float, float]
    c_minus: tuple[float, float]
    s22_log2: tuple[float, float]
    window: tuple[float, float]
    fit_residual: float
    k1_halved: float
    k2_halved: float

    @property
    def k_scale(self) -> float:
        return max(abs(self.k1), abs(self.k2))

    @property
    def s22_bounded(self) -> bool:
        """No ln**2 growth of s22 beyond 5% of the shear coefficient scale."""
        return max(abs(v) for v in self.s22_log2) <= 0.05 * self.k_scale

    @property
    def window_sensitivity(self) -> float:
        """Largest relative change of k1, k2 when the window is halved."""
        rel = []
        for a, b in ((self.k1, self.k1_halved), (self.k2, self.k2_halved)):
            scale = max(abs(a), abs(b))
            rel.append(0.0 if scale == 0 else abs(a - b) / scale)
        return max(rel)


def _tip_samples(p, s, tip, window, n):
    l = s.half_length
    t = l * np.geomspace(window[0], window[1], n)
    x = tip - np.sign(tip) * t
    return t, boundary_stresses(p, s, x)


def fit_singularity(
    p: Problem,
    s: TaylorSolution,
    tip: float | None = None,
    window=DEFAULT_WINDOW,
    samples: int = DEFAULT_FIT_SAMPLES,
) -> SingularityFit:
    """Fit s12+- ~ k ln**2 t + c1 ln t + c0 with t the distance to `tip` (default +l)."""
    l = s.half_length
    tip = l if tip is None else float(tip)
    if abs(abs(tip) - l) > 1e-12 * l:
        raise ValueError("tip must be +l or -l")
    if p.st.g1_plus == 0 or p.st.g1_minus == 0:
        raise ProblemError("singularity fit needs nonzero face curvature constants g1")
    lo, hi = map(float, window)
    if not 0 < lo < hi < 1:
        raise ValueError("window must satisfy 0 < t_min < t_max < 1")
    if samples < 20:
        raise ValueError("at least 20 samples are needed")

    t, sig = _tip_samples(p, s, tip, (lo, hi), samples)
    fp = fit_log_basis(t, sig["s12_plus"])
    fm = fit_log_basis(t, sig["s12_minus"])
    gp = fit_log_basis(t, sig["s22_plus"])
    gm = fit_log_basis(t, sig["s22_minus"])
    th, sig_h = _tip_samples(p, s, tip, (lo, 0.5 * hi), samples)
    fp_h = fit_log_basis(th, sig_h["s12_plus"])
    fm_h = fit_log_basis(th, sig_h["s12_minus"])
    return SingularityFit(
        tip=tip,
        k1=fp.c2,
        k2=fm.c2,
        c_plus=(fp.c0, fp.c1),
        c_minus=(fm.c0, fm.c1),
        s22_log2=(gp.c2, gm.c2),
        window=(lo, hi),
        fit_residual=max(fp.fit_residual, fm.fit_residual),
        k1_halved=fp_h.c2,
        k2_halved=fm_h.c2,
    )


# -- maxima ---------------------------------------------------------------------


@dataclass(frozen=True)
class StressMaxima:
    """max |stress| over the crack and where it occurs, per component."""

    values: dict
    locations: dict

    def __getitem__(self, key):
        return self.values[key]


def scan_grid(l, n=801, depth=7):
    """Crack grid refined geometrically towards both tips, tips excluded."""
    t = l * np.geomspace(10.0**-depth, 0.1, 60)
    core = np.linspace(-l, l, n)[1:-1]
    return np.unique(np.concatenate([-l + t, core, l - t]))


def max_stress_scan(p: Problem, s: TaylorSolution, x=None) -> StressMaxima:
    l = s.half_length
    x = scan_grid(l) if x is None else np.asarray(x, dtype=float)
    sig = boundary_stresses(p, s, x)
    vals, locs = {}, {}
    for k, v in sig.items():
        i = int(np.argmax(np.abs(v)))
        vals[k] = float(abs(v[i]))
        locs[k] = float(x[i])
    return StressMaxima(vals, locs)


# -- classical reference ----------------------------------------------------------


@dataclass(frozen=True)
class EnglandReference:
    """Classical pressurised interface crack (no surface tension).

    ``alpha_e`` uses kappa1 in both numerator and denominator.
    """

    alpha_e: float
    gamma_e: float
    mu1: float
    mu2: float
    kappa1: float
    kappa2: float
    pressure: float
    half_length: float

    @classmethod
    def build(cls, m1: Material, m2: Material, T: float, l: float = 1.0):
        k1 = derive_material_constants(m1).kappa
        k2 = derive_material_constants(m2).kappa
        a = (m1.mu + m2.mu * k1) / (m2.mu + m1.mu * k1)
        return cls(a, math.log(a) / (2 * math.pi), m1.mu, m2.mu, k1, k2, float(T), float(l))

    def _shape(self, x):
        l = self.half_length
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) > l):
            raise DomainError("England displacements are defined for |x| <= l")
        with np.errstate(divide="ignore", invalid="ignore"):
            osc = np.cos(self.gamma_e * np.log(np.abs((l + x) / (l - x))))
            val = np.sqrt(l * l - x * x) * osc
        return np.where(np.abs(x) == l, 0.0, val)

    def _amp(self, mu, kappa):
        a = self.alpha_e
        return self.pressure * (1 + kappa) * math.sqrt(a) / (2 * mu * (1 + a))

    def u2_plus(self, x):
        return self._amp(self.mu1, self.kappa1) * self._shape(x)

    def u2_minus(self, x):
        return -self._amp(self.mu2, self.kappa2) * self._shape(x)


def england_reference(m1: Material, m2: Material, T: float, l: float, x):
    ref = EnglandReference.build(m1, m2, T, l)
    return ref.u2_plus(x), ref.u2_minus(x)


def pressure_problem(m1, m2, st, T, l=1.0) -> Problem:
    """Problem with uniform face pressure `T` and no remote load.

    Pressure pushes the faces apart, i.e. a compressive face traction
    ``g+ = g- = -T`` in the sign convention of CrackLoad.
    """
    return Problem(m1, m2, st, load=CrackLoad.uniform(0.0, -T), half_length=l)


__all__ = [
    "FieldSample",
    "SingularityFit",
    "StressMaxima",
    "EnglandReference",
    "evaluate_slopes",
    "crack_opening",
    "boundary_stresses",
    "sample_fields",
    "fit_singularity",
    "max_stress_scan",
    "scan_grid",
    "england_reference",
    "pressure_problem",
]
