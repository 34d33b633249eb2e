import os
import warnings
from functools import lru_cache

import pytest
from hypothesis import settings

from stcrack.model import CrackLoad, FarField, Material, Problem, SurfaceTension

settings.register_profile("default", max_examples=40, deadline=None)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def baseline_problem(sigma=1.0, tau=0.0):
    m = Material(70.0, 0.3)
    st = SurfaceTension(0.01, 0.01, 0.01, 0.01, 0.005, 0.005)
    return Problem(m, m, st, FarField(sigma=sigma, tau=tau), CrackLoad(), 1.0)


def nu1_problem(nu1=0.3, sigma=1.0, tau=0.0):
    st = SurfaceTension(0.01, 0.01, 0.01, 0.01, 0.005, 0.005)
    return Problem(Material(70.0, nu1), Material(70.0, 0.3), st, FarField(sigma=sigma, tau=tau))


def quiet_problem(*a, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Problem(*a, **kw)


@lru_cache(maxsize=None)
def taylor_baseline(N=30):
    from stcrack.taylor import solve

    return solve(baseline_problem(), N)


@lru_cache(maxsize=None)
def spline_baseline(N=30):
    from stcrack.spline import solve_spline

    return solve_spline(baseline_problem(), N)


@pytest.fixture
def baseline():
    return baseline_problem()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
