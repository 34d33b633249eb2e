"""
Numerical kernels: Cauchy integrals of monomials, a principal-value
quadrature oracle, a guarded dense solver and a log-basis least-squares fit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

KINDS = ("inner_inner", "outer_inner", "inner_outer", "outer_outer")

#: series tail tolerance and hard cap on the number of series terms
SERIES_TOL = 1e-12
SERIES_CAP = 2000


class DomainError(ValueError):
    pass


class TruncationError(RuntimeError):
    pass


class SingularMatrixError(np.linalg.LinAlgError):
    pass


class IllConditionedError(np.linalg.LinAlgError):
    def __init__(self, msg, condition_estimate):
        super().__init__(msg)
        self.condition_estimate = condition_estimate


class ConvergenceError(RuntimeError):
    pass


class RankDeficiencyError(np.linalg.LinAlgError):
    pass


def truncation_order(ratio, tol=SERIES_TOL, cap=SERIES_CAP) -> int:
    """Smallest J with ``ratio**J < tol``; raises TruncationError above `cap`."""
    ratio = float(np.max(np.abs(ratio))) if np.size(ratio) else 0.0
    if ratio == 0.0:
        return 1
    if ratio >= 1.0:
        raise TruncationError("series does not converge on the boundary |x| = l")
    J = int(np.ceil(np.log(tol) / np.log(ratio))) + 1
    if J > cap:
        raise TruncationError(f"required truncation order {J} exceeds cap {cap}")
    return max(J, 1)


def _odd_weights(n):
    """(1 - (-1)**n) / n with the n = 0 entry set to zero."""
    n = np.asarray(n)
    out = np.zeros(n.shape)
    odd = n % 2 != 0
    out[odd] = 2.0 / n[odd]
    return out


def _check_domain(kind, x, l):
    ax = np.abs(x)
    if kind.endswith("_inner"):
        if np.any(ax >= l):
            raise DomainError(f"{kind}: x must satisfy |x| < l")
    elif np.any(ax <= l):
        raise DomainError(f"{kind}: x must satisfy |x| > l")


def cauchy_monomial_integral(kind, k, x, l=1.0, J=None, cap=SERIES_CAP):
    """Truncated-series principal value of a monomial Cauchy integral.

    ``kind`` names the integration domain then the location of `x`:

    * ``inner_inner``: PV int_{|r|<l} r**k / (r - x) dr, |x| < l
    * ``outer_inner``: int_{|r|>l} r**-k / (r - x) dr, |x| < l, k >= 1
    * ``inner_outer``: int_{|r|<l} r**k / (r - x) dr, |x| > l
    * ``outer_outer``: PV int_{|r|>l} r**-k / (r - x) dr, |x| > l, k >= 1

    `J` is the number of retained powers of x (or 1/x); by default it is
    chosen so the geometric tail is below 1e-12.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    k = int(k)
    if k < 0:
        raise ValueError("k must be >= 0")
    if kind.startswith("outer") and k < 1:
        raise ValueError("outer-domain integrands need k >= 1")
    x = np.asarray(x, dtype=float)
    _check_domain(kind, x, l)
    ratio = np.abs(x) / l if kind.endswith("_inner") else l / np.abs(x)
    if J is None:
        J = truncation_order(ratio, cap=cap)
    xs = x[..., None]
    if kind == "inner_inner":
        j = np.arange(J + k + 1)
        w = np.zeros(j.shape)
        m = j != k
        w[m] = -_odd_weights(j[m] - k) * l ** (k - j[m].astype(float))
        terms = w * xs ** j
    elif kind == "outer_inner":
        j = np.arange(J)
        terms = _odd_weights(j + k) * l ** (-(j + k).astype(float)) * xs ** j
    elif kind == "inner_outer":
        j = np.arange(1, J + 1)
        terms = -_odd_weights(j + k) * l ** (j + k).astype(float) * xs ** (-j.astype(float))
    else:
        j = np.arange(1, J + k + 1)
        w = np.zeros(j.shape)
        m = j != k
        w[m] = _odd_weights(j[m] - k) * l ** (j[m] - k).astype(float)
        terms = w * xs ** (-j.astype(float))
    out = terms.sum(axis=-1)
    return out if out.ndim else float(out)


def _inner_closed(k, x, l):
    # PV int_{-l}^{l} r^k/(r-x) dr = x^k ln|(l-x)/(l+x)| + sum_m x^(k-1-m) int r^m
    x = np.asarray(x, dtype=float)
    val = x**k * np.log(np.abs((l - x) / (l + x)))
    for m in range(k):
        if m % 2 == 0:
            val = val + x ** (k - 1 - m) * 2.0 * l ** (m + 1) / (m + 1)
    return val


def cauchy_monomial_closed(kind, k, x, l=1.0):
    """Closed form of the same integrals as `cauchy_monomial_integral`.

    Outer-domain integrals are mapped onto the inner interval with
    ``r -> l**2 / r``, i.e. int_{|r|>l} r**-k/(r - x) dr =
    -(l**(2-2k)/x) PV int_{|s|<l} s**(k-1)/(s - l**2/x) ds.  Valid
    arbitrarily close to the tips; where the logarithmic form would lose
    digits (x near 0 for outer_inner, |x| >= 2 l for x outside) the
    rapidly converging series is used instead.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    x = np.asarray(x, dtype=float)
    _check_domain(kind, x, l)
    if kind == "inner_inner":
        return _inner_closed(k, x, l)
    if k < 1 and kind.startswith("outer"):
        raise ValueError("outer-domain integrands need k >= 1")
    if kind in ("inner_outer", "outer_outer"):
        # far from the interval the closed form cancels catastrophically
        # (x**k ln terms against the polynomial part); the series is exact
        # to rounding there after a few dozen terms
        far = np.abs(x) >= 2.0 * l
        out = np.empty(x.shape)
        if np.any(far):
            out[far] = cauchy_monomial_integral(kind, k, x[far], l)
        near = ~far
        if np.any(near):
            xn = x[near]
            if kind == "inner_outer":
                out[near] = _inner_closed(k, xn, l)
            else:
                out[near] = -(l ** (2 - 2 * k) / xn) * _inner_closed(k - 1, l**2 / xn, l)
        return out if out.ndim else float(out)
    if kind == "outer_inner":
        # the mapped form divides by x; near the centre the series is exact
        # to rounding after a few dozen terms
        small = np.abs(x) <= 0.5 * l
        out = np.empty(x.shape)
        if np.any(small):
            out[small] = cauchy_monomial_integral(kind, k, x[small], l)
        big = ~small
        if np.any(big):
            xb = x[big]
            out[big] = -(l ** (2 - 2 * k) / xb) * _inner_closed(k - 1, l**2 / xb, l)
        return out if out.ndim else float(out)


def pv_quadrature_oracle(f, a, b, x, tol=1e-12, max_level=12):
    """Principal value of int_a^b f(r)/(r - x) dr by singularity subtraction.

    The symmetric neighbourhood ``[x - d, x + d]`` is handled by pairing
    ``r = x +- t`` so the kernel cancels; the remainder is regular.  Every
    piece uses composite Gauss-Legendre rules, refined by doubling the panel
    count and Richardson-extrapolated until successive estimates agree.
    """
    if not a < x < b:
        raise DomainError("singular point must be interior to the interval")
    d = min(x - a, b - x)

    def paired(t):
        return (f(x + t) - f(x - t)) / t

    def regular(r):
        return f(r) / (r - x)

    nodes, weights = np.polynomial.legendre.leggauss(10)

    def composite(g, lo, hi, panels):
        if hi <= lo:
            return 0.0
        edges = np.linspace(lo, hi, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        pts = mid[:, None] + half[:, None] * nodes
        return float(np.sum(half[:, None] * weights * g(pts)))

    def estimate(panels):
        return (
            composite(paired, 0.0, d, panels)
            + composite(regular, a, x - d, panels)
            + composite(regular, x + d, b, panels)
        )

    prev = estimate(1)
    for level in range(1, max_level + 1):
        cur = estimate(2**level)
        # Gauss order 20 -> error ratio 2**20 per doubling
        extrap = cur + (cur - prev) / (2.0**20 - 1.0)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return extrap
        prev = cur
    raise ConvergenceError("PV quadrature refinement stalled")


@dataclass(frozen=True, eq=False)
class LinearSystem:
    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.matrix, dtype=float)
        b = np.asarray(self.rhs, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"matrix must be square, got shape {A.shape}")
        if b.shape != (A.shape[0],):
            raise ValueError(f"rhs length {b.shape} does not match dimension {A.shape[0]}")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "rhs", b)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class SolveReport:
    solution: np.ndarray
    condition_estimate: float
    residual_norm: float


MAX_CONDITION = 1e12


def _equilibrate(A):
    """Power-of-two row and column scalings so every row/column max is ~1."""
    absA = np.abs(A)
    rmax = absA.max(axis=1)
    r = np.where(rmax > 0, 2.0 ** -np.round(np.log2(np.where(rmax > 0, rmax, 1.0))), 1.0)
    cmax = (absA * r[:, None]).max(axis=0)
    c = np.where(cmax > 0, 2.0 ** -np.round(np.log2(np.where(cmax > 0, cmax, 1.0))), 1.0)
    return r, c


def solve_dense(sys: LinearSystem, max_condition=MAX_CONDITION) -> SolveReport:
    """LU solve with partial pivoting on the equilibrated matrix.

    Rows and columns are scaled by powers of two (exact in floating point)
    before factorisation; the condition estimate is the LAPACK 1-norm
    estimate of the scaled matrix.
    """
    A, b = sys.matrix, sys.rhs
    if A.size == 0:
        return SolveReport(np.zeros(0), 1.0, 0.0)
    r, c = _equilibrate(A)
    As = A * r[:, None] * c[None, :]
    with warnings.catch_warnings():
        # exact singularity is reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(As, check_finite=True)
    if np.any(np.diag(lu) == 0.0):
        raise SingularMatrixError("matrix is exactly singular")
    anorm = np.linalg.norm(As, 1)
    (gecon,) = scipy.linalg.get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    cond = np.inf if rcond == 0 else 1.0 / rcond
    if not np.isfinite(cond):
        raise SingularMatrixError("matrix is numerically singular")
    if cond > max_condition:
        raise IllConditionedError(f"condition estimate {cond:.3e} exceeds {max_condition:.1e}", cond)
    x = c * scipy.linalg.lu_solve((lu, piv), r * b)
    res = float(np.max(np.abs(A @ x - b)))
    return SolveReport(solution=x, condition_estimate=float(cond), residual_norm=res)


@dataclass(frozen=True)
class LogFit:
    c0: float
    c1: float
    c2: float
    fit_residual: float

    def __iter__(self):
        return iter((self.c0, self.c1, self.c2, self.fit_residual))


def fit_log_basis(t, values) -> LogFit:
    """Least squares of `values` on ``{1, ln t, ln(t)**2}``; returns RMS residual too."""
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    if t.shape != v.shape or t.ndim != 1:
        raise ValueError("t and values must be 1-D arrays of equal length")
    if len(t) < 6:
        raise ValueError("at least 6 samples are needed")
    if np.any(t <= 0):
        raise ValueError("sample abscissae must be strictly positive")
    if len(np.unique(t)) < 3:
        raise RankDeficiencyError("samples span fewer than 3 distinct abscissae")
    L = np.log(t)
    B = np.column_stack([np.ones_like(L), L, L**2])
    coef, *_ = np.linalg.lstsq(B, v, rcond=None)
    rms = float(np.sqrt(np.mean((B @ coef - v) ** 2)))
    return LogFit(float(coef[0]), float(coef[1]), float(coef[2]), rms)
