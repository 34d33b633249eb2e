"""
Problem description for an interface crack between two elastic half-planes.

The upper half-plane carries index 1, the lower one index 2.  Crack faces
(``|x| < l``) and the bonded interface (``|x| > l``) carry a
curvature-dependent surface tension ``gamma0 + gamma1 * div(n)``.

All quantities are treated as dimensionless consistent units.  The Kolosov
constant uses the plane-strain convention ``kappa = 3 - 4 nu``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np


class InvalidMaterialError(ValueError):
    """Raised for a shear modulus <= 0 or a Poisson ratio outside (-1, 0.5)."""


class ProblemError(ValueError):
    """Raised when a problem instance is malformed."""


@dataclass(frozen=True)
class Material:
    mu: float
    nu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise InvalidMaterialError(f"shear modulus must be > 0, got {self.mu!r}")
        if not (math.isfinite(self.nu) and -1.0 < self.nu < 0.5):
            raise InvalidMaterialError(
                f"Poisson ratio must lie in (-1, 0.5), got {self.nu!r}"
            )


@dataclass(frozen=True)
class MaterialConstants:
    """Constants of the half-plane Dirichlet-to-Neumann map.

    ``alpha`` multiplies the local displacement slope, ``beta`` the Cauchy
    integral of the other slope component.
    """

    lam: float
    alpha: float
    beta: float
    kappa: float


def derive_material_constants(m: Material) -> MaterialConstants:
    """Lame constant, DtN constants and plane-strain Kolosov constant of `m`."""
    if not isinstance(m, Material):
        raise TypeError("expected a Material")
    mu, nu = m.mu, m.nu
    lam = 2.0 * mu * nu / (1.0 - 2.0 * nu)
    alpha = 2.0 * mu**2 / (lam + 3.0 * mu)
    beta = 2.0 * mu * (lam + 2.0 * mu) / ((lam + 3.0 * mu) * math.pi)
    return MaterialConstants(lam=lam, alpha=alpha, beta=beta, kappa=3.0 - 4.0 * nu)


@dataclass(frozen=True)
class SurfaceTension:
    """Surface-tension constants on the upper face, lower face and interface."""

    g0_plus: float = 0.0
    g0_minus: float = 0.0
    g1_plus: float = 0.0
    g1_minus: float = 0.0
    g0_int: float = 0.0
    g1_int: float = 0.0

    def __post_init__(self):
        for name in ("g0_plus", "g0_minus", "g1_plus", "g1_minus", "g0_int", "g1_int"):
            if not math.isfinite(getattr(self, name)):
                raise ProblemError(f"surface tension {name} must be finite")

    @classmethod
    def uniform(cls, gamma: float, interface: float | None = None) -> "SurfaceTension":
        """All face constants equal to `gamma`; interface constants default to it too."""
        gi = gamma if interface is None else interface
        return cls(gamma, gamma, gamma, gamma, gi, gi)

    @property
    def curvature_terms_nonzero(self) -> bool:
        return self.g1_plus != 0 and self.g1_minus != 0 and self.g1_int != 0


@dataclass(frozen=True)
class FarField:
    """Remote loading shared by both half-planes.

    ``sigma_x1`` and the rotations are optional; they only enter the
    compatibility check and do not affect the perturbation problem.
    """

    sigma: float = 0.0
    tau: float = 0.0
    sigma_x1: float | None = None
    sigma_x2: float | None = None
    omega1: float | None = None
    omega2: float | None = None


def _as_coeffs(v) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=float))
    if a.ndim != 1:
        raise ProblemError("load coefficients must be a 1-D sequence")
    if not np.all(np.isfinite(a)):
        raise ProblemError("load coefficients must be finite")
    return a


@dataclass(frozen=True, eq=False)
class CrackLoad:
    """Polynomial face tractions, coefficients in ascending powers of x.

    ``f`` is the shear and ``g`` the normal traction on the upper (``plus``)
    and lower (``minus``) face.  All four vectors are zero-padded to a
    common length on construction.
    """

    f_plus: np.ndarray = field(default_factory=lambda: np.zeros(1))
    f_minus: np.ndarray = field(default_factory=lambda: np.zeros(1))
    g_plus: np.ndarray = field(default_factory=lambda: np.zeros(1))
    g_minus: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        vecs = [_as_coeffs(getattr(self, n)) for n in ("f_plus", "f_minus", "g_plus", "g_minus")]
        n = max(len(v) for v in vecs)
        for name, v in zip(("f_plus", "f_minus", "g_plus", "g_minus"), vecs):
            padded = np.zeros(n)
            padded[: len(v)] = v
            padded.setflags(write=False)
            object.__setattr__(self, name, padded)

    @property
    def degree(self) -> int:
        """Highest power with a nonzero coefficient (0 for an all-zero load)."""
        nz = np.nonzero(
            np.abs(self.f_plus) + np.abs(self.f_minus) + np.abs(self.g_plus) + np.abs(self.g_minus)
        )[0]
        return int(nz[-1]) if len(nz) else 0

    def padded(self, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """The four coefficient vectors padded (or checked) to length `n`."""
        if self.degree >= n:
            raise ProblemError(f"load degree {self.degree} exceeds order {n - 1}")
        out = []
        for v in (self.f_plus, self.f_minus, self.g_plus, self.g_minus):
            p = np.zeros(n)
            m = min(n, len(v))
            p[:m] = v[:m]
            out.append(p)
        return tuple(out)

    def scaled(self, s: float) -> "CrackLoad":
        return CrackLoad(s * self.f_plus, s * self.f_minus, s * self.g_plus, s * self.g_minus)

    @classmethod
    def uniform(cls, f: float = 0.0, g: float = 0.0) -> "CrackLoad":
        """Equal constant tractions on both faces."""
        return cls([f], [f], [g], [g])

    def __eq__(self, other):
        if not isinstance(other, CrackLoad):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, n), getattr(other, n))
            for n in ("f_plus", "f_minus", "g_plus", "g_minus")
        )

    __hash__ = None


@dataclass(frozen=True)
class Problem:
    mat1: Material
    mat2: Material
    st: SurfaceTension = field(default_factory=SurfaceTension)
    far: FarField = field(default_factory=FarField)
    load: CrackLoad = field(default_factory=CrackLoad)
    half_length: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.half_length) and self.half_length > 0):
            raise ProblemError(f"half_length must be > 0, got {self.half_length!r}")
        if not check_load_equilibrium(self.load, self.half_length):
            raise ProblemError("crack-face tractions are not in equilibrium")
        if not self.st.curvature_terms_nonzero:
            warnings.warn(
                "gamma1 constants are not all nonzero; the logarithmic tip "
                "singularity classification does not apply",
                stacklevel=3,
            )

    @property
    def c1(self) -> MaterialConstants:
        return derive_material_constants(self.mat1)

    @property
    def c2(self) -> MaterialConstants:
        return derive_material_constants(self.mat2)

    def scaled(self, s: float) -> "Problem":
        """Same configuration with every load (far field and faces) scaled by `s`."""
        far = FarField(sigma=s * self.far.sigma, tau=s * self.far.tau)
        return Problem(self.mat1, self.mat2, self.st, far, self.load.scaled(s), self.half_length)


@dataclass(frozen=True)
class CompatibilityReport:
    sigma_x2: float | None
    rotation_mismatch: float
    sigma_x2_ok: bool | None = None
    rotation_ok: bool | None = None
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


def _close(a: float, b: float, rtol: float) -> bool:
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1.0)


def check_farfield_compatibility(
    far: FarField,
    c1: MaterialConstants,
    c2: MaterialConstants,
    mu1: float,
    mu2: float,
    rtol: float = 1e-12,
) -> CompatibilityReport:
    """Remote sigma_x2 and rotation mismatch implied by sigma_x1, sigma and tau.

    Supplied values (``sigma_x2``, ``omega1``/``omega2``) are compared with
    the compatible ones at relative tolerance `rtol`.
    """
    k1, k2 = c1.kappa, c2.kappa
    rot = (mu2 - mu1) / (2.0 * mu1 * mu2) * far.tau
    sx2 = None
    failures = []
    sx2_ok = rot_ok = None
    if far.sigma_x1 is not None:
        rhs = ((3.0 - k1) / mu1 - (3.0 - k2) / mu2) * far.sigma
        sx2 = ((1.0 + k1) / mu1 * far.sigma_x1 - rhs) * mu2 / (1.0 + k2)
        if far.sigma_x2 is not None:
            sx2_ok = _close(far.sigma_x2, sx2, rtol)
            if not sx2_ok:
                failures.append(f"sigma_x2={far.sigma_x2!r} incompatible, expected {sx2!r}")
    if far.omega1 is not None and far.omega2 is not None:
        rot_ok = _close(far.omega2 - far.omega1, rot, rtol)
        if not rot_ok:
            failures.append(f"rotation mismatch {far.omega2 - far.omega1!r}, expected {rot!r}")
    return CompatibilityReport(sx2, rot, sx2_ok, rot_ok, tuple(failures))


def monomial_integrals(n: int, l: float) -> np.ndarray:
    """Exact integrals of x**k over [-l, l] for k = 0..n-1."""
    k = np.arange(n)
    return np.where(k % 2 == 0, 2.0 * l ** (k + 1) / (k + 1), 0.0)


def load_resultants(load: CrackLoad, l: float) -> tuple[float, float]:
    """Net shear and normal resultants ``int (f+ - f-)`` and ``int (g+ - g-)``."""
    w = monomial_integrals(len(load.f_plus), l)
    return float(w @ (load.f_plus - load.f_minus)), float(w @ (load.g_plus - load.g_minus))


def check_load_equilibrium(load: CrackLoad, l: float) -> bool:
    fr, gr = load_resultants(load, l)
    w = monomial_integrals(len(load.f_plus), l)
    scale = max(
        1.0,
        *(float(np.abs(v) @ np.abs(w)) for v in (load.f_plus, load.f_minus, load.g_plus, load.g_minus)),
    )
    tol = 1e-12 * scale
    return abs(fr) <= tol and abs(gr) <= tol
