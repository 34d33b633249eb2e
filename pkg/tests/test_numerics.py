import numpy as np
import pytest
import scipy.integrate
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from stcrack.numerics import (
    KINDS,
    DomainError,
    IllConditionedError,
    LinearSystem,
    RankDeficiencyError,
    SingularMatrixError,
    TruncationError,
    cauchy_monomial_closed,
    cauchy_monomial_integral,
    fit_log_basis,
    pv_quadrature_oracle,
    solve_dense,
    truncation_order,
)

inner_x = st.floats(-0.95, 0.95)
outer_x = st.one_of(st.floats(1.05, 20.0), st.floats(-20.0, -1.05))
lengths = st.floats(0.3, 3.0)


# -- oracles independent of the series ------------------------------------------


def outer_domain_oracle(k, x, l):
    """int_{|r|>l} r**-k/(r - x) dr for |x| < l by adaptive quadrature."""
    f = lambda r: r**-k / (r - x)
    return scipy.integrate.quad(f, l, np.inf, epsabs=1e-13, epsrel=1e-13)[0] + scipy.integrate.quad(
        f, -np.inf, -l, epsabs=1e-13, epsrel=1e-13
    )[0]


def outer_outer_oracle(k, x, l):
    # r = l^2/s turns the exterior PV into an interior PV at s = l^2/x
    X = l * l / x
    inner = pv_quadrature_oracle(lambda s: s ** (k - 1), -l, l, X)
    return -(l ** (2 - 2 * k) / x) * inner


def test_examples():
    assert cauchy_monomial_integral("inner_inner", 0, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert cauchy_monomial_integral("inner_inner", 0, 0.5) == pytest.approx(np.log(1 / 3), abs=1e-12)
    assert cauchy_monomial_integral("inner_inner", 1, 0.5) == pytest.approx(2 + 0.5 * np.log(1 / 3), abs=1e-12)
    assert cauchy_monomial_integral("outer_inner", 1, 0.0) == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("k", range(7))
def test_inner_inner_vs_pv_oracle(k):
    rng = np.random.default_rng(100 + k)
    for x in rng.uniform(-0.9, 0.9, 20):
        want = pv_quadrature_oracle(lambda r: r**k, -1.0, 1.0, x)
        assert cauchy_monomial_integral("inner_inner", k, x) == pytest.approx(want, abs=1e-8)


@pytest.mark.parametrize("k", range(1, 7))
def test_outer_inner_vs_quadrature(k):
    rng = np.random.default_rng(200 + k)
    for x in rng.uniform(-0.9, 0.9, 8):
        assert cauchy_monomial_integral("outer_inner", k, x, 1.3) == pytest.approx(
            outer_domain_oracle(k, x, 1.3), abs=1e-9
        )


@pytest.mark.parametrize("k", range(7))
def test_inner_outer_vs_quadrature(k):
    rng = np.random.default_rng(300 + k)
    for x in rng.choice([-1, 1], 8) * rng.uniform(1.1, 6.0, 8):
        want = scipy.integrate.quad(lambda r: r**k / (r - x), -1.0, 1.0, epsabs=1e-14)[0]
        assert cauchy_monomial_integral("inner_outer", k, x) == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("k", range(1, 7))
def test_outer_outer_vs_pv_oracle(k):
    rng = np.random.default_rng(400 + k)
    for x in rng.choice([-1, 1], 8) * rng.uniform(1.1, 6.0, 8):
        assert cauchy_monomial_integral("outer_outer", k, x) == pytest.approx(
            outer_outer_oracle(k, x, 1.0), abs=1e-8
        )


@given(inner_x, lengths)
def test_k0_equals_log(xr, l):
    x = xr * l
    assert cauchy_monomial_integral("inner_inner", 0, x, l) == pytest.approx(
        np.log(abs((l - x) / (l + x))), rel=1e-10, abs=1e-12
    )


@given(st.sampled_from(KINDS), st.integers(0, 6), st.floats(0.5, 0.9), st.booleans(), lengths)
def test_series_matches_closed_form(kind, k, frac, neg, l):
    # ratios in [0.5, 0.9]: both routes are genuinely evaluated
    if kind.startswith("outer") and k == 0:
        k = 1
    x = frac * l if kind.endswith("_inner") else l / frac
    x = -x if neg else x
    a = cauchy_monomial_integral(kind, k, x, l)
    b = cauchy_monomial_closed(kind, k, x, l)
    assert a == pytest.approx(b, rel=1e-10, abs=1e-10 * max(1.0, l**k))


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("kind,k", [("inner_outer", 5), ("outer_outer", 4)])
def test_closed_form_far_from_interval(kind, k):
    # the logarithmic form cancels badly at |x| >> l; the routine must not
    for x in (-20.0, 7.5, 350.0):
        if kind == "inner_outer":
            want = scipy.integrate.quad(lambda r: r**k / (r - x), -1, 1, epsabs=1e-16, epsrel=1e-14)[0]
        else:
            want = outer_outer_oracle(k, x, 1.0)
        assert cauchy_monomial_closed(kind, k, x) == pytest.approx(want, rel=1e-9, abs=1e-18)


def test_vectorised():
    x = np.linspace(-0.8, 0.8, 5)
    v = cauchy_monomial_integral("inner_inner", 2, x)
    assert v.shape == (5,)
    assert v[2] == pytest.approx(cauchy_monomial_integral("inner_inner", 2, 0.0))


@pytest.mark.parametrize("kind,x", [("inner_inner", 1.0), ("outer_inner", 1.2), ("inner_outer", 0.5), ("outer_outer", -1.0)])
def test_domain_errors(kind, x):
    with pytest.raises(DomainError):
        cauchy_monomial_integral(kind, 1, x)


def test_truncation_cap():
    with pytest.raises(TruncationError):
        cauchy_monomial_integral("inner_inner", 0, 0.9999)
    with pytest.raises(TruncationError):
        truncation_order(1.0)
    assert 0.5 ** truncation_order(0.5) < 1e-12


def test_argument_errors():
    with pytest.raises(ValueError):
        cauchy_monomial_integral("bogus", 0, 0.1)
    with pytest.raises(ValueError):
        cauchy_monomial_integral("outer_inner", 0, 0.1)
    with pytest.raises(ValueError):
        cauchy_monomial_integral("inner_inner", -1, 0.1)


# -- PV oracle -------------------------------------------------------------------


def test_pv_oracle_examples():
    assert pv_quadrature_oracle(lambda r: np.ones_like(r), -1, 1, 0.0) == pytest.approx(0.0, abs=1e-14)
    assert pv_quadrature_oracle(lambda r: np.ones_like(r), -1, 1, 0.5) == pytest.approx(np.log(1 / 3), abs=1e-10)
    assert pv_quadrature_oracle(lambda r: r**2, -1, 1, 0.0) == pytest.approx(0.0, abs=1e-14)


@given(st.lists(st.floats(-3, 3), min_size=1, max_size=9), st.floats(-0.9, 0.9))
def test_pv_oracle_polynomials(c, x):
    # scipy's QAWC Cauchy-weight quadrature as a second opinion
    f = lambda r: np.polynomial.polynomial.polyval(r, c)
    want = scipy.integrate.quad(f, -1, 1, weight="cauchy", wvar=x, epsabs=1e-13)[0]
    assert pv_quadrature_oracle(f, -1, 1, x) == pytest.approx(want, abs=1e-10)


def test_pv_oracle_domain():
    with pytest.raises(DomainError):
        pv_quadrature_oracle(np.cos, -1, 1, 1.0)


# -- dense solver ------------------------------------------------------------------


def test_solve_identity_and_diag():
    b = np.array([1.0, -2.0, 3.0])
    r = solve_dense(LinearSystem(np.eye(3), b))
    assert np.array_equal(r.solution, b)
    assert r.condition_estimate == pytest.approx(1.0)
    r = solve_dense(LinearSystem(np.diag([2.0, 4.0]), np.array([2.0, 8.0])))
    assert np.allclose(r.solution, [1.0, 2.0], atol=0)


def test_solve_hilbert():
    H = scipy.linalg.hilbert(4)
    r = solve_dense(LinearSystem(H, H.sum(axis=1)))
    assert np.allclose(r.solution, 1.0, atol=1e-8)


@given(st.integers(2, 30), st.integers(0, 2**31))
def test_solve_random_residual_bound(n, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(n, n)) + n * np.eye(n)
    x0 = rng.normal(size=n)
    r = solve_dense(LinearSystem(A, A @ x0))
    assert r.condition_estimate < 1e6
    assert r.residual_norm <= 1e-9 * np.abs(A).max() * np.abs(r.solution).max()
    assert np.allclose(r.solution, x0, rtol=1e-9, atol=1e-12)


def test_solve_rejects():
    with pytest.raises(SingularMatrixError):
        solve_dense(LinearSystem(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2)))
    H = scipy.linalg.hilbert(14)
    with pytest.raises(IllConditionedError) as e:
        solve_dense(LinearSystem(H, np.ones(14)))
    assert e.value.condition_estimate > 1e12


def test_linear_system_validation():
    with pytest.raises(ValueError):
        LinearSystem(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ValueError):
        LinearSystem(np.eye(2), np.ones(3))
    s = LinearSystem(np.eye(2), np.ones(2))
    assert s.dimension == 2
    with pytest.raises(ValueError):
        s.matrix[0, 0] = 3.0


# -- log fit -----------------------------------------------------------------------


def test_fit_examples():
    t = np.geomspace(1e-3, 0.1, 10)
    c0, c1, c2, res = fit_log_basis(t, np.full(10, 5.0))
    assert (c0, c1, c2) == pytest.approx((5, 0, 0), abs=1e-10)
    L = np.log(t)
    c0, c1, c2, res = fit_log_basis(t, 3 * L**2 - 2 * L + 1)
    assert (c0, c1, c2) == pytest.approx((1, -2, 3), abs=1e-10)
    assert res < 1e-10


def test_fit_converges_for_perturbed_log2():
    # ln^2 t + t: the regular part fades as the window shrinks
    errs = []
    for w in (1e-1, 1e-2, 1e-3, 1e-4):
        t = np.geomspace(w * 1e-2, w, 30)
        errs.append(abs(fit_log_basis(t, np.log(t) ** 2 + t).c2 - 1.0))
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-4


def test_fit_errors():
    with pytest.raises(ValueError):
        fit_log_basis(np.linspace(0.1, 0.2, 5), np.ones(5))
    with pytest.raises(ValueError):
        fit_log_basis(np.linspace(-0.1, 0.2, 8), np.ones(8))
    with pytest.raises(RankDeficiencyError):
        fit_log_basis(np.array([0.1, 0.1, 0.1, 0.2, 0.2, 0.2]), np.ones(6))
