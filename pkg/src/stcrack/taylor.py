"""
Taylor-polynomial solver for the six coupled singular integro-differential
equations of the surface-tension interface crack.

Unknown slope functions (perturbation field, no remote load):

    phi1, phi2 = u1,1 on the upper/lower crack face   sum_{k=0}^{N}   a_k x**k
    phi        = u1,1 on the interface                sum_{k=1}^{N+1} a_k x**-k
    psi1, psi2 = u2,1 on the upper/lower crack face   sum_{k=0}^{N+2} b_k x**k
    psi        = u2,1 on the interface                sum_{k=1}^{N+1} b_k x**-k

The algebraic system matches powers x**0..x**N of the four crack-face
equations and x**-1..x**-(N+1) of the two interface equations, and closes
with the two zero-net-traction and two single-valuedness conditions.

Unknown vector layout (stable, 6N+10 entries)::

    [a1_0..a1_N | a2_0..a2_N | a3_1..a3_{N+1} | b1_0..b1_{N+2} | b2_0..b2_{N+2} | b3_1..b3_{N+1}]

Row layout: four crack-face blocks (k = 0..N), two interface blocks
(k = 1..N+1), then the four constraints in the order normal traction,
shear traction, horizontal closure, vertical closure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import Problem, load_resultants, monomial_integrals
from .numerics import (
    DomainError,
    LinearSystem,
    SolveReport,
    cauchy_monomial_closed,
    cauchy_monomial_integral,
    solve_dense,
)

DEFAULT_ORDER = 30


def layout(N: int) -> dict[str, slice]:
    """Slices of each coefficient block inside the unknown vector."""
    sizes = [("a1", N + 1), ("a2", N + 1), ("a3", N + 1), ("b1", N + 3), ("b2", N + 3), ("b3", N + 1)]
    out, start = {}, 0
    for name, n in sizes:
        out[name] = slice(start, start + n)
        start += n
    return out


def _odd(n):
    n = np.asarray(n)
    out = np.zeros(n.shape)
    m = n % 2 != 0
    out[m] = 2.0 / n[m]
    return out


# Coefficient-matching operators: row index is the matched power of x, column
# index the power of r in the density.  See the Cauchy integrals of monomials
# in numerics.cauchy_monomial_integral.


def _inner_inner(rows, cols, l):
    k, j = np.meshgrid(rows, cols, indexing="ij")
    return -_odd(k - j) * float(l) ** (j - k).astype(float)


def _outer_inner(rows, cols, l):
    k, j = np.meshgrid(rows, cols, indexing="ij")
    return _odd(j + k) * float(l) ** (-(j + k)).astype(float)


def _inner_outer(rows, cols, l):
    k, j = np.meshgrid(rows, cols, indexing="ij")
    return -_odd(j + k) * float(l) ** (j + k).astype(float)


def _outer_outer(rows, cols, l):
    k, j = np.meshgrid(rows, cols, indexing="ij")
    return _odd(k - j) * float(l) ** (k - j).astype(float)


def assemble(p: Problem, N: int = DEFAULT_ORDER) -> LinearSystem:
    if N < 2:
        raise ValueError("order N must be >= 2")
    l = p.half_length
    c1, c2 = p.c1, p.c2
    a1_, b1_ = c1.alpha, c1.beta
    a2_, b2_ = c2.alpha, c2.beta
    st = p.st
    fp, fm, gp, gm = p.load.padded(N + 1)
    sl = layout(N)
    n = 6 * N + 10
    A = np.zeros((n, n))
    rhs = np.zeros(n)

    kin = np.arange(N + 1)  # matched powers on the crack
    kout = np.arange(1, N + 2)  # matched negative powers on the interface
    ja = np.arange(N + 1)
    jb = np.arange(N + 3)
    jneg = np.arange(1, N + 2)

    II_a = _inner_inner(kin, ja, l)
    II_b = _inner_inner(kin, jb, l)
    OI = _outer_inner(kin, jneg, l)
    IO_a = _inner_outer(kout, ja, l)
    IO_b = _inner_outer(kout, jb, l)
    OO = _outer_outer(kout, jneg, l)

    # d/dx and d2/dx2 of psi1/psi2 projected on powers 0..N
    D1 = np.zeros((N + 1, N + 3))
    D2 = np.zeros((N + 1, N + 3))
    D1[kin, kin + 1] = kin + 1
    D2[kin, kin + 2] = (kin + 2) * (kin + 1)
    E = np.zeros((N + 1, N + 3))
    E[kin, kin] = 1.0

    r = 0
    rows = slice(r, r + N + 1)
    # upper face, shear
    A[rows, sl["b1"]] += a1_ * E - st.g1_plus * D2
    A[rows, sl["a1"]] += b1_ * II_a
    A[rows, sl["a3"]] += b1_ * OI
    rhs[rows] = fp
    rhs[r] -= p.far.tau

    r += N + 1
    rows = slice(r, r + N + 1)
    # upper face, normal
    A[rows, sl["a1"]] += -a1_ * np.eye(N + 1)
    A[rows, sl["b1"]] += b1_ * II_b + st.g0_plus * D1
    A[rows, sl["b3"]] += b1_ * OI
    rhs[rows] = gp
    rhs[r] -= p.far.sigma

    r += N + 1
    rows = slice(r, r + N + 1)
    # lower face, shear
    A[rows, sl["b2"]] += a2_ * E + st.g1_minus * D2
    A[rows, sl["a2"]] += -b2_ * II_a
    A[rows, sl["a3"]] += -b2_ * OI
    rhs[rows] = fm
    rhs[r] -= p.far.tau

    r += N + 1
    rows = slice(r, r + N + 1)
    # lower face, normal
    A[rows, sl["a2"]] += -a2_ * np.eye(N + 1)
    A[rows, sl["b2"]] += -b2_ * II_b - st.g0_minus * D1
    A[rows, sl["b3"]] += -b2_ * OI
    rhs[rows] = gm
    rhs[r] -= p.far.sigma

    # interface: psi'' and psi' projected on powers x^-1..x^-(N+1)
    r += N + 1
    rows = slice(r, r + N + 1)
    Dm2 = np.zeros((N + 1, N + 1))
    Dm1 = np.zeros((N + 1, N + 1))
    for i, k in enumerate(kout):
        if k >= 3:
            Dm2[i, k - 3] = (k - 2) * (k - 1)
        if k >= 2:
            Dm1[i, k - 2] = -(k - 1)
    A[rows, sl["b3"]] += (a1_ - a2_) * np.eye(N + 1) - st.g1_int * Dm2
    A[rows, sl["a1"]] += b1_ * IO_a
    A[rows, sl["a2"]] += b2_ * IO_a
    A[rows, sl["a3"]] += (b1_ + b2_) * OO

    r += N + 1
    rows = slice(r, r + N + 1)
    A[rows, sl["a3"]] += -(a1_ - a2_) * np.eye(N + 1)
    A[rows, sl["b1"]] += b1_ * IO_b
    A[rows, sl["b2"]] += b2_ * IO_b
    A[rows, sl["b3"]] += (b1_ + b2_) * OO + st.g0_int * Dm1

    fres, gres = load_resultants(p.load, l)
    r += N + 1
    # net normal traction: int(g0+ psi1' + g0- psi2') = int(g+ - g-)
    span = l ** jb.astype(float) * (1 - (-1.0) ** jb)
    A[r, sl["b1"]] = st.g0_plus * span
    A[r, sl["b2"]] = st.g0_minus * span
    rhs[r] = gres
    r += 1
    # net shear traction: int(g1+ psi1'' + g1- psi2'') = -int(f+ - f-)
    dspan = np.zeros(N + 3)
    dspan[1:] = jb[1:] * l ** (jb[1:] - 1.0) * (1 - (-1.0) ** (jb[1:] - 1))
    A[r, sl["b1"]] = st.g1_plus * dspan
    A[r, sl["b2"]] = st.g1_minus * dspan
    rhs[r] = -fres
    r += 1
    wa = monomial_integrals(N + 1, l)
    A[r, sl["a1"]] = wa
    A[r, sl["a2"]] = -wa
    r += 1
    wb = monomial_integrals(N + 3, l)
    A[r, sl["b1"]] = wb
    A[r, sl["b2"]] = -wb
    assert r == n - 1
    return LinearSystem(A, rhs)


@dataclass(frozen=True, eq=False)
class TaylorSolution:
    """Coefficients of the six slope series.

    ``a3`` and ``b3`` hold the coefficients of x**-1 .. x**-(N+1).
    """

    order: int
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    b3: np.ndarray
    half_length: float
    report: SolveReport | None = field(default=None, repr=False)

    @classmethod
    def from_vector(cls, v, N, l, report=None):
        sl = layout(N)
        parts = {k: np.array(v[s], dtype=float) for k, s in sl.items()}
        return cls(order=N, half_length=l, report=report, **parts)

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.a1, self.a2, self.a3, self.b1, self.b2, self.b3])

    @classmethod
    def zeros(cls, N, l=1.0):
        return cls.from_vector(np.zeros(6 * N + 10), N, l)

    def replace(self, **kw) -> "TaylorSolution":
        d = dict(order=self.order, a1=self.a1, a2=self.a2, a3=self.a3, b1=self.b1,
                 b2=self.b2, b3=self.b3, half_length=self.half_length)
        d.update(kw)
        return TaylorSolution(**d)

    @property
    def condition_estimate(self) -> float | None:
        return None if self.report is None else self.report.condition_estimate


def solve(p: Problem, N: int = DEFAULT_ORDER) -> TaylorSolution:
    rep = solve_dense(assemble(p, N))
    return TaylorSolution.from_vector(rep.solution, N, p.half_length, rep)


# -- series evaluation ------------------------------------------------------


def poly(c, x, deriv=0):
    """Ascending-power polynomial (or its derivative) at `x`."""
    c = np.asarray(c, dtype=float)
    if deriv:
        c = np.polynomial.polynomial.polyder(c, deriv)
    return np.polynomial.polynomial.polyval(x, c)


def negpoly(c, x, deriv=0):
    """sum_k c[k-1] x**-k for k = 1..len(c), or its derivative."""
    x = np.asarray(x, dtype=float)
    k = np.arange(1, len(c) + 1, dtype=float)
    coef = np.asarray(c, dtype=float)
    p = -k
    for _ in range(deriv):
        coef = coef * p
        p = p - 1
    return np.sum(coef * x[..., None] ** p, axis=-1)


# -- residual of the original singular system --------------------------------


@dataclass(frozen=True)
class ResidualReport:
    """Max-norm residuals of the six equations and the four constraints."""

    equations: tuple[float, float, float, float, float, float]
    constraints: tuple[float, float, float, float]
    shear_traction_dtn: float

    @property
    def max_equation(self) -> float:
        return max(self.equations)


def _cauchy_sum(coefs, kind, x, l, powers, closed=False):
    fn = cauchy_monomial_closed if closed else cauchy_monomial_integral
    out = np.zeros(np.shape(x))
    for c, k in zip(coefs, powers):
        if c != 0.0:
            out = out + c * fn(kind, int(k), x, l)
    return out


def crack_equation_terms(p: Problem, s: TaylorSolution, x, closed=False):
    """Left- and right-hand sides of the four crack-face equations at `x`.

    Returns a list of ``(lhs, rhs)`` array pairs.
    """
    l = s.half_length
    x = np.asarray(x, dtype=float)
    c1, c2, st = p.c1, p.c2, p.st
    pa = np.arange(len(s.a1))
    pb = np.arange(len(s.b1))
    pn = np.arange(1, len(s.a3) + 1)
    I_phi1 = _cauchy_sum(s.a1, "inner_inner", x, l, pa, closed)
    I_phi2 = _cauchy_sum(s.a2, "inner_inner", x, l, pa, closed)
    I_psi1 = _cauchy_sum(s.b1, "inner_inner", x, l, pb, closed)
    I_psi2 = _cauchy_sum(s.b2, "inner_inner", x, l, pb, closed)
    O_phi = _cauchy_sum(s.a3, "outer_inner", x, l, pn, closed)
    O_psi = _cauchy_sum(s.b3, "outer_inner", x, l, pn, closed)
    psi1, psi2 = poly(s.b1, x), poly(s.b2, x)
    phi1, phi2 = poly(s.a1, x), poly(s.a2, x)
    fp, fm = poly(p.load.f_plus, x), poly(p.load.f_minus, x)
    gp, gm = poly(p.load.g_plus, x), poly(p.load.g_minus, x)
    tau, sig = p.far.tau, p.far.sigma
    return [
        (c1.alpha * psi1 + c1.beta * (I_phi1 + O_phi) + tau, st.g1_plus * poly(s.b1, x, 2) + fp),
        (-c1.alpha * phi1 + c1.beta * (I_psi1 + O_psi) + sig, -st.g0_plus * poly(s.b1, x, 1) + gp),
        (c2.alpha * psi2 - c2.beta * (I_phi2 + O_phi) + tau, -st.g1_minus * poly(s.b2, x, 2) + fm),
        (-c2.alpha * phi2 - c2.beta * (I_psi2 + O_psi) + sig, st.g0_minus * poly(s.b2, x, 1) + gm),
    ]


def interface_equation_terms(p: Problem, s: TaylorSolution, x, closed=False):
    l = s.half_length
    x = np.asarray(x, dtype=float)
    c1, c2, st = p.c1, p.c2, p.st
    pa = np.arange(len(s.a1))
    pb = np.arange(len(s.b1))
    pn = np.arange(1, len(s.a3) + 1)
    da = c1.alpha - c2.alpha
    lhs5 = (
        da * negpoly(s.b3, x)
        + c1.beta * _cauchy_sum(s.a1, "inner_outer", x, l, pa, closed)
        + c2.beta * _cauchy_sum(s.a2, "inner_outer", x, l, pa, closed)
        + (c1.beta + c2.beta) * _cauchy_sum(s.a3, "outer_outer", x, l, pn, closed)
    )
    lhs6 = (
        -da * negpoly(s.a3, x)
        + c1.beta * _cauchy_sum(s.b1, "inner_outer", x, l, pb, closed)
        + c2.beta * _cauchy_sum(s.b2, "inner_outer", x, l, pb, closed)
        + (c1.beta + c2.beta) * _cauchy_sum(s.b3, "outer_outer", x, l, pn, closed)
    )
    return [
        (lhs5, st.g1_int * negpoly(s.b3, x, 2)),
        (lhs6, -st.g0_int * negpoly(s.b3, x, 1)),
    ]


def constraint_values(p: Problem, s: TaylorSolution) -> tuple[float, float, float, float]:
    """Signed defects of the two net-traction and two closure conditions."""
    l = s.half_length
    st = p.st
    fres, gres = load_resultants(p.load, l)

    def span(c, d):
        return float(poly(c, l, d) - poly(c, -l, d))

    wa = monomial_integrals(len(s.a1), l)
    wb = monomial_integrals(len(s.b1), l)
    return (
        st.g0_plus * span(s.b1, 0) + st.g0_minus * span(s.b2, 0) - gres,
        st.g1_plus * span(s.b1, 1) + st.g1_minus * span(s.b2, 1) + fres,
        float(wa @ (s.a1 - s.a2)),
        float(wb @ (s.b1 - s.b2)),
    )


def _log_moment(n):
    """int_{-1}^{1} t**n ln((1+t)/(1-t)) dt for n >= -1."""
    if n == -1:
        return np.pi**2 / 2.0
    if n % 2 == 0:
        return 0.0
    k = np.arange(1, n + 2)
    harmonic = np.sum(1.0 / k)
    alternating = np.sum((-1.0) ** (k + 1) / k)
    return 2.0 * (harmonic + alternating) / (n + 1)


def shear_traction_dtn(p: Problem, s: TaylorSolution) -> float:
    """Net shear traction int (s12+ - s12-) dx evaluated through the DtN maps.

    Independent of the boundary-condition route used in the solved system.
    The x-integral of each Cauchy integral is exchanged with the r-integral,
    leaving log moments that are known in closed form.
    """
    l = s.half_length
    c1, c2 = p.c1, p.c2
    wb = monomial_integrals(len(s.b1), l)
    inner = np.array([l ** (j + 1) * _log_moment(j) for j in range(len(s.a1))])
    outer = np.array([l ** (1 - j) * _log_moment(j - 2) for j in range(1, len(s.a3) + 1)])
    I1, I2, O = inner @ s.a1, inner @ s.a2, outer @ s.a3
    return float(
        c1.alpha * (wb @ s.b1) - c2.alpha * (wb @ s.b2) + c1.beta * (I1 + O) + c2.beta * (I2 + O)
    )


def default_residual_points(l=1.0, n=24):
    """Off-grid crack and interface sample sets used for residual checks."""
    t = (np.arange(n) + 0.5) / n
    crack = l * 0.95 * (2.0 * t - 1.0)
    outer = l * np.geomspace(1.05, 9.5, n // 2)
    interface = np.concatenate([-outer[::-1], outer])
    return crack, interface


def residual(p: Problem, s: TaylorSolution, xs=None) -> ResidualReport:
    """Residuals of the original six equations at sample points.

    `xs` is a pair ``(crack_points, interface_points)``; crack points need
    ``|x| < l (1 - 1e-3)``, interface points ``l (1 + 1e-3) < |x| < 10 l``.
    """
    l = s.half_length
    if xs is None:
        xs = default_residual_points(l)
    xc, xi = (np.asarray(v, dtype=float) for v in xs)
    if np.any(np.abs(xc) >= l * (1 - 1e-3)):
        raise DomainError("crack sample points must satisfy |x| < l (1 - 1e-3)")
    if np.any(np.abs(xi) <= l * (1 + 1e-3)) or np.any(np.abs(xi) >= 10 * l):
        raise DomainError("interface sample points must satisfy l (1 + 1e-3) < |x| < 10 l")
    eqs = []
    for lhs, rhs in crack_equation_terms(p, s, xc):
        eqs.append(float(np.max(np.abs(lhs - rhs))) if len(xc) else 0.0)
    for lhs, rhs in interface_equation_terms(p, s, xi):
        eqs.append(float(np.max(np.abs(lhs - rhs))) if len(xi) else 0.0)
    cons = tuple(abs(v) for v in constraint_values(p, s))
    fres, _ = load_resultants(p.load, l)
    dtn = abs(shear_traction_dtn(p, s))
    return ResidualReport(tuple(eqs), cons, dtn)
