"""
Spline collocation on the finite interval, used to cross-check the Taylor
solver.

The interface unknowns are folded onto ``(-l, l)`` with the inversion
``x -> l**2 / x``::

    phi0(x) = (l**2 / x) phi(l**2 / x),    psi0(x) = (l**2 / x) psi(l**2 / x)

so every integral runs over ``[-l, l]``.  phi-type functions are linear
splines, psi-type functions cubic splines in (value, second derivative)
form.  The six equations are collocated at the 2N segment midpoints.

Folded system (|x| < l), with ``C[g](x) = PV int g(r)/(r - x) dr`` and
``K[g](x) = int g(r)/(r x - l**2) dr``::

    a1 psi1 + b1 C[phi1] - b1 K[phi0] + tau = g1+ psi1'' + f+
   -a1 phi1 + b1 C[psi1] - b1 K[psi0] + sig = -g0+ psi1' + g+
    a2 psi2 - b2 C[phi2] + b2 K[phi0] + tau = -g1- psi2'' + f-
   -a2 phi2 - b2 C[psi2] + b2 K[psi0] + sig = g0- psi2' + g-
    (a1-a2) psi0 + l^2 (b1 K[phi1] + b2 K[phi2]) - (b1+b2) C[phi0]
        = g1i l^-4 (2 x^2 psi0 + 4 x^3 psi0' + x^4 psi0'')
   -(a1-a2) phi0 + l^2 (b1 K[psi1] + b2 K[psi2]) - (b1+b2) C[psi0]
        = g0i l^-2 (x psi0 + x^2 psi0')
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
import scipy.linalg

from .model import Problem, load_resultants
from .numerics import LinearSystem, SolveReport, solve_dense
from .taylor import TaylorSolution, poly

_SERIES_TERMS = 80


@dataclass(frozen=True, eq=False)
class SplineGrid:
    N: int
    l: float = 1.0

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")

    @property
    def h(self) -> float:
        return self.l / self.N

    @property
    def nodes(self) -> np.ndarray:
        return -self.l + np.arange(2 * self.N + 1) * self.h

    @property
    def midpoints(self) -> np.ndarray:
        x = self.nodes
        return 0.5 * (x[:-1] + x[1:])

    def piece(self, x) -> np.ndarray:
        """1-based index j of the piece [x_{j-1}, x_j] containing x."""
        j = np.floor((np.asarray(x, dtype=float) + self.l) / self.h).astype(int) + 1
        return np.clip(j, 1, 2 * self.N)


# -- piecewise kernel moments -------------------------------------------------


def _centred_power_integrals(half, nmax):
    """int_{-half}^{half} s**n ds for n = 0..nmax."""
    n = np.arange(nmax + 1)
    return np.where(n % 2 == 0, 2.0 * half ** (n + 1) / (n + 1), 0.0)


def cauchy_centre_moments(d, h, nmax=3):
    """PV int_{-h/2}^{h/2} s**n / (s - d) ds for n = 0..nmax.

    Closed form with a logarithm when the pole is within 1.5 h of the piece
    centre; a geometric series in ``s / d`` (ratio <= 1/3) otherwise.
    """
    half = 0.5 * h
    out = np.zeros(nmax + 1)
    if abs(d) < 1.5 * h:
        P = _centred_power_integrals(half, nmax)
        if d == 0.0:
            out[0] = 0.0
            out[1:] = P[: nmax]
            return out
        lg = np.log(abs((half - d) / (-half - d)))
        for n in range(nmax + 1):
            out[n] = d**n * lg + sum(d ** (n - 1 - i) * P[i] for i in range(n))
        return out
    P = _centred_power_integrals(half, nmax + _SERIES_TERMS)
    k = np.arange(_SERIES_TERMS)
    w = -(1.0 / d) ** (k + 1)
    for n in range(nmax + 1):
        out[n] = w @ P[n + k]
    return out


def inversion_centre_moments(xi, r0, h, l, nmax=3):
    """int_{-h/2}^{h/2} s**n / ((r0 + s) xi - l**2) ds for n = 0..nmax.

    Regular kernel; expanded about the piece centre r0 with ratio
    ``|xi| h / (2 (l**2 - r0 xi)) <= 1/2`` on the collocation grid.
    """
    half = 0.5 * h
    D0 = l**2 - r0 * xi
    q = xi / D0
    P = _centred_power_integrals(half, nmax + _SERIES_TERMS)
    k = np.arange(_SERIES_TERMS)
    w = -(q**k) / D0
    return np.array([w @ P[n + k] for n in range(nmax + 1)])


def _end_moments(C, h):
    """Moments against (r - x_{j-1})**m and (x_j - r)**m from centre moments."""
    half = 0.5 * h
    left = np.zeros(4)
    right = np.zeros(4)
    for m in range(4):
        for i in range(m + 1):
            c = comb(m, i) * half ** (m - i)
            left[m] += c * C[i]
            right[m] += c * (-1) ** i * C[i]
    return left, right


def _piece_weights(C, h):
    """Weights of nodal parameters for one piece given centre moments C.

    Returns (lin_left, lin_right, y_left, y_right, z_left, z_right): the
    integral of the linear/cubic spline basis attached to node j-1 (left)
    and j (right) against the kernel.
    """
    L, R = _end_moments(C, h)
    lin_r = L[1] / h
    lin_l = R[1] / h
    z_r = L[3] / (6 * h) - h / 6 * L[1]
    z_l = R[3] / (6 * h) - h / 6 * R[1]
    return lin_l, lin_r, lin_l, lin_r, z_l, z_r


def kernel_rows(grid: SplineGrid, kernel: str, x):
    """Integral operators on nodal parameters evaluated at points `x`.

    Returns ``(W, Y, Z)`` with shape (len(x), 2N+1): ``W @ w`` is the kernel
    integral of the linear spline with nodal values w, ``Y @ y + Z @ z`` that
    of the cubic spline with parameters (y, z).  ``kernel`` is ``"cauchy"``
    for 1/(r - x) or ``"inversion"`` for 1/(r x - l**2).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    nodes = grid.nodes
    h, l = grid.h, grid.l
    n = len(nodes)
    W = np.zeros((len(x), n))
    Y = np.zeros((len(x), n))
    Z = np.zeros((len(x), n))
    for i, xi in enumerate(x):
        for j in range(1, n):
            r0 = 0.5 * (nodes[j - 1] + nodes[j])
            if kernel == "cauchy":
                C = cauchy_centre_moments(xi - r0, h)
            elif kernel == "inversion":
                C = inversion_centre_moments(xi, r0, h, l)
            else:
                raise ValueError(f"unknown kernel {kernel!r}")
            wl, wr, yl, yr, zl, zr = _piece_weights(C, h)
            W[i, j - 1] += wl
            W[i, j] += wr
            Y[i, j - 1] += yl
            Y[i, j] += yr
            Z[i, j - 1] += zl
            Z[i, j] += zr
    return W, Y, Z


def point_rows(grid: SplineGrid, x):
    """Evaluation operators at `x` (any point of [-l, l]).

    Returns dict with keys ``lin``, ``y0``, ``z0``, ``y1``, ``z1``, ``y2``,
    ``z2``: the linear spline value, and the cubic spline value / first /
    second derivative as (y-part, z-part).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    nodes, h = grid.nodes, grid.h
    n = len(nodes)
    j = grid.piece(x)
    a = x - nodes[j - 1]  # x - x_{j-1}
    b = nodes[j] - x  # x_j - x
    rows = np.arange(len(x))
    out = {k: np.zeros((len(x), n)) for k in ("lin", "y0", "z0", "y1", "z1", "y2", "z2")}

    def put(key, left, right):
        out[key][rows, j - 1] += left
        out[key][rows, j] += right

    put("lin", b / h, a / h)
    put("y0", b / h, a / h)
    put("z0", b**3 / (6 * h) - h / 6 * b, a**3 / (6 * h) - h / 6 * a)
    put("y1", -1.0 / h * np.ones_like(x), 1.0 / h * np.ones_like(x))
    put("z1", -(b**2) / (2 * h) + h / 6, a**2 / (2 * h) - h / 6)
    put("y2", np.zeros_like(x), np.zeros_like(x))
    put("z2", b / h, a / h)
    return out


# -- unknown layout -------------------------------------------------------------

_FUNCS = ("w0", "w1", "w2", "y0", "z0", "y1", "z1", "y2", "z2")


def _full_layout(N):
    n = 2 * N + 1
    return {name: slice(i * n, (i + 1) * n) for i, name in enumerate(_FUNCS)}


def _pinned(N):
    full = _full_layout(N)
    return [full["w0"].start + N, full["y0"].start + N]


def transform_to_finite(p: Problem):
    """Kernels and derivative substitutions of the folded system.

    Returns a namespace-like dict with callables ``cauchy(r, x)``,
    ``inversion(r, x)``, ``fold(f)`` (maps an interface function to its
    folded counterpart), ``interface_curvature(x, psi0, dpsi0, d2psi0)``
    and ``interface_slope(x, psi0, dpsi0)``.
    """
    l = p.half_length
    st = p.st

    def fold(f):
        return lambda x: (l**2 / np.asarray(x, dtype=float)) * f(l**2 / np.asarray(x, dtype=float))

    return {
        "cauchy": lambda r, x: 1.0 / (np.asarray(r) - x),
        "inversion": lambda r, x: 1.0 / (np.asarray(r) * x - l**2),
        "fold": fold,
        "interface_curvature": lambda x, v, d1, d2: st.g1_int
        * l**-4
        * (2 * x**2 * v + 4 * x**3 * d1 + x**4 * d2),
        "interface_slope": lambda x, v, d1: st.g0_int * l**-2 * (x * v + x**2 * d1),
    }


def assemble_spline_system(p: Problem, N: int) -> LinearSystem:
    if N < 4:
        raise ValueError("N must be >= 4")
    grid = SplineGrid(N, p.half_length)
    l = grid.l
    h = grid.h
    c1, c2, st = p.c1, p.c2, p.st
    a1, b1 = c1.alpha, c1.beta
    a2, b2 = c2.alpha, c2.beta
    full = _full_layout(N)
    n1 = 2 * N + 1
    nfull = 9 * n1
    xi = grid.midpoints
    m = len(xi)

    Cw, Cy, Cz = kernel_rows(grid, "cauchy", xi)
    Kw, Ky, Kz = kernel_rows(grid, "inversion", xi)
    pr = point_rows(grid, xi)

    def blank():
        return np.zeros((m, nfull))

    rows, rhs = [], []
    fp, fm = poly(p.load.f_plus, xi), poly(p.load.f_minus, xi)
    gp, gm = poly(p.load.g_plus, xi), poly(p.load.g_minus, xi)

    # upper shear
    A = blank()
    A[:, full["y1"]] += a1 * pr["y0"]
    A[:, full["z1"]] += a1 * pr["z0"] - st.g1_plus * pr["z2"]
    A[:, full["w1"]] += b1 * Cw
    A[:, full["w0"]] += -b1 * Kw
    rows.append(A)
    rhs.append(fp - p.far.tau)
    # upper normal
    A = blank()
    A[:, full["w1"]] += -a1 * pr["lin"]
    A[:, full["y1"]] += b1 * Cy + st.g0_plus * pr["y1"]
    A[:, full["z1"]] += b1 * Cz + st.g0_plus * pr["z1"]
    A[:, full["y0"]] += -b1 * Ky
    A[:, full["z0"]] += -b1 * Kz
    rows.append(A)
    rhs.append(gp - p.far.sigma)
    # lower shear
    A = blank()
    A[:, full["y2"]] += a2 * pr["y0"]
    A[:, full["z2"]] += a2 * pr["z0"] + st.g1_minus * pr["z2"]
    A[:, full["w2"]] += -b2 * Cw
    A[:, full["w0"]] += b2 * Kw
    rows.append(A)
    rhs.append(fm - p.far.tau)
    # lower normal
    A = blank()
    A[:, full["w2"]] += -a2 * pr["lin"]
    A[:, full["y2"]] += -b2 * Cy - st.g0_minus * pr["y1"]
    A[:, full["z2"]] += -b2 * Cz - st.g0_minus * pr["z1"]
    A[:, full["y0"]] += b2 * Ky
    A[:, full["z0"]] += b2 * Kz
    rows.append(A)
    rhs.append(gm - p.far.sigma)

    x2, x3, x4 = xi**2, xi**3, xi**4
    da = a1 - a2
    # folded interface shear
    A = blank()
    A[:, full["y0"]] += da * pr["y0"] - st.g1_int * l**-4 * (
        2 * x2[:, None] * pr["y0"] + 4 * x3[:, None] * pr["y1"] + x4[:, None] * pr["y2"]
    )
    A[:, full["z0"]] += da * pr["z0"] - st.g1_int * l**-4 * (
        2 * x2[:, None] * pr["z0"] + 4 * x3[:, None] * pr["z1"] + x4[:, None] * pr["z2"]
    )
    A[:, full["w1"]] += b1 * l**2 * Kw
    A[:, full["w2"]] += b2 * l**2 * Kw
    A[:, full["w0"]] += -(b1 + b2) * Cw
    rows.append(A)
    rhs.append(np.zeros(m))
    # folded interface normal
    A = blank()
    A[:, full["w0"]] += -da * pr["lin"]
    A[:, full["y1"]] += b1 * l**2 * Ky
    A[:, full["z1"]] += b1 * l**2 * Kz
    A[:, full["y2"]] += b2 * l**2 * Ky
    A[:, full["z2"]] += b2 * l**2 * Kz
    A[:, full["y0"]] += -(b1 + b2) * Cy - st.g0_int * l**-2 * (
        xi[:, None] * pr["y0"] + x2[:, None] * pr["y1"]
    )
    A[:, full["z0"]] += -(b1 + b2) * Cz - st.g0_int * l**-2 * (
        xi[:, None] * pr["z0"] + x2[:, None] * pr["z1"]
    )
    rows.append(A)
    rhs.append(np.zeros(m))

    # first-derivative continuity, ghost parameters outside [-l, l] are zero
    for name in ("0", "1", "2"):
        A = np.zeros((n1, nfull))
        ys, zs = full["y" + name], full["z" + name]
        for j in range(n1):
            for dj, zc, yc in ((-1, 1.0, 6 / h**2), (0, 4.0, -12 / h**2), (1, 1.0, 6 / h**2)):
                k = j + dj
                if 0 <= k < n1:
                    A[j, zs.start + k] += zc
                    A[j, ys.start + k] -= yc
        rows.append(A)
        rhs.append(np.zeros(n1))

    fres, gres = load_resultants(p.load, l)
    ends = point_rows(grid, np.array([-l, l]))
    A = np.zeros((4, nfull))
    # net normal traction
    for name, g0 in (("1", st.g0_plus), ("2", st.g0_minus)):
        A[0, full["y" + name]] += g0 * (ends["y0"][1] - ends["y0"][0])
        A[0, full["z" + name]] += g0 * (ends["z0"][1] - ends["z0"][0])
    # net shear traction
    for name, g1 in (("1", st.g1_plus), ("2", st.g1_minus)):
        A[1, full["y" + name]] += g1 * (ends["y1"][1] - ends["y1"][0])
        A[1, full["z" + name]] += g1 * (ends["z1"][1] - ends["z1"][0])
    lin_w, cub_y, cub_z = integral_weights(grid)
    A[2, full["w1"]] += lin_w
    A[2, full["w2"]] -= lin_w
    A[3, full["y1"]] += cub_y
    A[3, full["z1"]] += cub_z
    A[3, full["y2"]] -= cub_y
    A[3, full["z2"]] -= cub_z
    rows.append(A)
    rhs.append(np.array([gres, -fres, 0.0, 0.0]))

    M = np.vstack(rows)
    b = np.concatenate(rhs)
    keep = np.setdiff1d(np.arange(nfull), _pinned(N))
    M = M[:, keep]
    assert M.shape == (18 * N + 7, 18 * N + 7), M.shape
    return LinearSystem(M, b)


def integral_weights(grid: SplineGrid):
    """Exact integral over [-l, l] of linear / cubic splines as nodal weights."""
    n = len(grid.nodes)
    h = grid.h
    lin = np.full(n, h)
    lin[[0, -1]] = h / 2
    cub_y = lin.copy()
    cub_z = -(h**2) / 12 * lin
    return lin, cub_y, cub_z


@dataclass(frozen=True, eq=False)
class SplineSolution:
    """Nodal spline parameters; pinned entries (w0, y0 at x = 0) are zero."""

    grid: SplineGrid
    w0: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    y0: np.ndarray
    z0: np.ndarray
    y1: np.ndarray
    z1: np.ndarray
    y2: np.ndarray
    z2: np.ndarray
    report: SolveReport | None = field(default=None, repr=False)

    @classmethod
    def from_vector(cls, v, grid: SplineGrid, report=None):
        N = grid.N
        full = np.zeros(9 * (2 * N + 1))
        keep = np.setdiff1d(np.arange(len(full)), _pinned(N))
        full[keep] = v
        lay = _full_layout(N)
        return cls(grid=grid, report=report, **{k: full[s].copy() for k, s in lay.items()})

    def psi(self, which: int, x, deriv=0):
        """Cubic spline psi_which (0 folded interface, 1 upper, 2 lower) at x."""
        pr = point_rows(self.grid, x)
        y, z = getattr(self, f"y{which}"), getattr(self, f"z{which}")
        return pr[f"y{deriv}"] @ y + pr[f"z{deriv}"] @ z

    def phi(self, which: int, x):
        pr = point_rows(self.grid, x)
        return pr["lin"] @ getattr(self, f"w{which}")

    def displacement(self, which: int, x):
        """int_{-l}^{x} psi_which(t) dt (exact for the cubic pieces)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        g = self.grid
        nodes, h = g.nodes, g.h
        y, z = getattr(self, f"y{which}"), getattr(self, f"z{which}")
        piece_int = h * (y[:-1] + y[1:]) / 2 - h**3 * (z[:-1] + z[1:]) / 24
        cum = np.concatenate([[0.0], np.cumsum(piece_int)])
        j = g.piece(x)
        a = x - nodes[j - 1]
        b = nodes[j] - x
        # antiderivative of S_j from x_{j-1} to x
        zr, zl, yr, yl = z[j], z[j - 1], y[j], y[j - 1]
        part = (
            zr * a**4 / (24 * h)
            + zl * (h**4 - b**4) / (24 * h)
            + (yr / h - h * zr / 6) * a**2 / 2
            + (yl / h - h * zl / 6) * (h**2 - b**2) / 2
        )
        return cum[j - 1] + part


def solve_spline(p: Problem, N: int = 30) -> SplineSolution:
    rep = solve_dense(assemble_spline_system(p, N))
    return SplineSolution.from_vector(rep.solution, SplineGrid(N, p.half_length), rep)


# -- cross-validation -----------------------------------------------------------


@dataclass(frozen=True)
class Discrepancy:
    psi1_linf: float
    psi2_linf: float
    opening_linf: float
    psi1_l2: float
    psi2_l2: float
    opening_l2: float
    upper_linf: float
    lower_linf: float


def _rel(a, b):
    scale = max(np.max(np.abs(b)), np.max(np.abs(a)))
    if scale == 0:
        return 0.0, 0.0
    d = a - b
    l2s = np.sqrt(np.mean(b**2)) or scale
    return float(np.max(np.abs(d)) / scale), float(np.sqrt(np.mean(d**2)) / l2s)


def taylor_displacement(c, x, l):
    return poly(np.polynomial.polynomial.polyint(c, lbnd=-l), x)


def compare(t: TaylorSolution, s, xs=None) -> Discrepancy:
    """Relative discrepancies of psi1, psi2 and the crack opening.

    `s` may be a SplineSolution or another TaylorSolution.  Each metric is
    normalised by the larger max-norm of the two curves.
    """
    l = t.half_length
    if xs is None:
        xs = np.linspace(-l, l, 401)
    xs = np.asarray(xs, dtype=float)

    def curves(sol):
        if isinstance(sol, TaylorSolution):
            p1, p2 = poly(sol.b1, xs), poly(sol.b2, xs)
            u1 = taylor_displacement(sol.b1, xs, l)
            u2 = taylor_displacement(sol.b2, xs, l)
        else:
            p1, p2 = sol.psi(1, xs), sol.psi(2, xs)
            u1, u2 = sol.displacement(1, xs), sol.displacement(2, xs)
        return p1, p2, u1, u2

    A, B = curves(t), curves(s)
    p1 = _rel(A[0], B[0])
    p2 = _rel(A[1], B[1])
    op = _rel(A[2] - A[3], B[2] - B[3])
    up = _rel(A[2], B[2])
    lo = _rel(A[3], B[3])
    return Discrepancy(p1[0], p2[0], op[0], p1[1], p2[1], op[1], up[0], lo[0])


def cubic_interpolant(grid: SplineGrid, y) -> np.ndarray:
    """Second-derivative parameters z of the cubic spline through nodal `y`.

    Solves the continuity relations with the same zero ghost values as the
    verifier, so it is exact for functions that vanish beyond the tips.
    """
    y = np.asarray(y, dtype=float)
    n, h = len(grid.nodes), grid.h
    if y.shape != (n,):
        raise ValueError(f"expected {n} nodal values")
    yp = np.concatenate([[0.0], y, [0.0]])
    rhs = 6.0 / h**2 * (yp[:-2] - 2 * yp[1:-1] + yp[2:])
    band = np.vstack([np.ones(n), 4 * np.ones(n), np.ones(n)])
    return scipy.linalg.solve_banded((1, 1), band, rhs)
