"""
Run configuration: a YAML (or JSON) document describing one problem plus
the workflow settings.  See ``configs/tension_identical.yaml`` for an annotated example.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .model import (
    CrackLoad,
    FarField,
    InvalidMaterialError,
    Material,
    Problem,
    ProblemError,
    SurfaceTension,
)

SWEEPABLE = ("nu1", "mu1", "gamma-all", "sigma", "tau")
ST_KEYS = ("g0_plus", "g0_minus", "g1_plus", "g1_minus", "g0_int", "g1_int")
LOAD_KEYS = ("f_plus", "f_minus", "g_plus", "g_minus")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Sweep:
    parameter: str
    start: float
    stop: float
    steps: int
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.steps)
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class RunConfig:
    problem: Problem
    order: int = 30
    outputs: str = "out"
    sample_count: int = 201
    sweep: Sweep | None = None
    tolerance_taylor: float = 1e-2
    tolerance_spline: float = 2e-2
    verify_problem: Problem | None = None
    pressure: float = 1.0
    gammas: tuple[float, ...] = (0.0, 0.001, 0.01, 0.1, 1.0)
    raw: dict = field(default_factory=dict, compare=False, repr=False)


def _get(d: dict, key: str, where: str, default: Any = ...):
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be a mapping")
    if key not in d:
        if default is ...:
            raise ConfigError(f"missing mandatory field '{where}.{key}'")
        return default
    return d[key]


def _num(v, where) -> float:
    try:
        out = float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{where} must be a number, got {v!r}") from None
    if not np.isfinite(out):
        raise ConfigError(f"{where} must be finite")
    return out


def _material(d, where) -> Material:
    return Material(_num(_get(d, "mu", where), f"{where}.mu"), _num(_get(d, "nu", where), f"{where}.nu"))


def parse_problem(d: dict, where: str = "problem") -> Problem:
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be a mapping")
    if "l" in d and "half_length" not in d:
        d = {**d, "half_length": d["l"]}
    if "half_length" not in d:
        raise ConfigError(f"missing mandatory field '{where}.half_length' (crack half-length l)")
    l = _num(d["half_length"], f"{where}.half_length")
    m1 = _material(_get(d, "upper", where), f"{where}.upper")
    m2 = _material(_get(d, "lower", where), f"{where}.lower")

    st_d = _get(d, "surface_tension", where, {}) or {}
    unknown = set(st_d) - set(ST_KEYS)
    if unknown:
        raise ConfigError(f"unknown surface_tension keys: {sorted(unknown)}")
    st = SurfaceTension(**{k: _num(v, f"{where}.surface_tension.{k}") for k, v in st_d.items()})

    far_d = _get(d, "far_field", where, {}) or {}
    far = FarField(
        sigma=_num(far_d.get("sigma", 0.0), f"{where}.far_field.sigma"),
        tau=_num(far_d.get("tau", 0.0), f"{where}.far_field.tau"),
    )

    ld = _get(d, "crack_load", where, {}) or {}
    unknown = set(ld) - set(LOAD_KEYS)
    if unknown:
        raise ConfigError(f"unknown crack_load keys: {sorted(unknown)}")
    load = CrackLoad(**{k: np.atleast_1d(np.asarray(v, dtype=float)) for k, v in ld.items()})
    return Problem(m1, m2, st, far, load, l)


def problem_to_dict(p: Problem) -> dict:
    st = p.st
    return {
        "half_length": p.half_length,
        "upper": {"mu": p.mat1.mu, "nu": p.mat1.nu},
        "lower": {"mu": p.mat2.mu, "nu": p.mat2.nu},
        "surface_tension": {k: getattr(st, k) for k in ST_KEYS},
        "far_field": {"sigma": p.far.sigma, "tau": p.far.tau},
        "crack_load": {k: getattr(p.load, k).tolist() for k in LOAD_KEYS},
    }


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a mapping at top level")
    try:
        problem = parse_problem(_get(doc, "problem", "config"))
        order = int(doc.get("order", 30))
        samples = int(doc.get("samples", 201))
        if order < 2:
            raise ConfigError("order must be >= 2")
        if samples < 2:
            raise ConfigError("samples must be >= 2")

        sweep = None
        if doc.get("sweep") is not None:
            sd = doc["sweep"]
            name = _get(sd, "parameter", "sweep")
            if name not in SWEEPABLE:
                raise ConfigError(f"sweep.parameter must be one of {SWEEPABLE}, got {name!r}")
            spacing = sd.get("spacing", "linear")
            if spacing not in ("linear", "log"):
                raise ConfigError("sweep.spacing must be 'linear' or 'log'")
            steps = int(_get(sd, "steps", "sweep"))
            if steps < 1:
                raise ConfigError("sweep.steps must be >= 1")
            sweep = Sweep(
                name,
                _num(_get(sd, "start", "sweep"), "sweep.start"),
                _num(_get(sd, "stop", "sweep"), "sweep.stop"),
                steps,
                spacing,
            )

        vd = doc.get("verify") or {}
        vprob = None
        if vd.get("problem") is not None:
            vprob = parse_problem(vd["problem"], "verify.problem")

        rd = doc.get("reference") or {}
        gammas = tuple(_num(g, "reference.gammas") for g in rd.get("gammas", RunConfig.gammas))
        if any(g < 0 for g in gammas):
            raise ConfigError("reference.gammas must be >= 0")

        return RunConfig(
            problem=problem,
            order=order,
            outputs=str(doc.get("outputs", "out")),
            sample_count=samples,
            sweep=sweep,
            tolerance_taylor=_num(vd.get("tolerance_taylor", 1e-2), "verify.tolerance_taylor"),
            tolerance_spline=_num(vd.get("tolerance_spline", 2e-2), "verify.tolerance_spline"),
            verify_problem=vprob,
            pressure=_num(rd.get("pressure", 1.0), "reference.pressure"),
            gammas=gammas,
            raw=doc,
        )
    except (ProblemError, InvalidMaterialError) as e:
        raise ConfigError(str(e)) from e
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from e


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from e
    try:
        if path.suffix == ".json":
            doc = json.loads(text)
        else:
            doc = yaml.safe_load(text)
    except (yaml.YAMLError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot parse config {path}: {e}") from e
    return parse_config(doc)


def with_parameter(p: Problem, name: str, value: float) -> Problem:
    """Copy of `p` with one sweepable parameter replaced."""
    if name == "nu1":
        return Problem(Material(p.mat1.mu, value), p.mat2, p.st, p.far, p.load, p.half_length)
    if name == "mu1":
        return Problem(Material(value, p.mat1.nu), p.mat2, p.st, p.far, p.load, p.half_length)
    if name == "gamma-all":
        st = SurfaceTension(value, value, value, value, p.st.g0_int, p.st.g1_int)
        return Problem(p.mat1, p.mat2, st, p.far, p.load, p.half_length)
    if name == "sigma":
        return Problem(p.mat1, p.mat2, p.st, FarField(sigma=value, tau=p.far.tau), p.load, p.half_length)
    if name == "tau":
        return Problem(p.mat1, p.mat2, p.st, FarField(sigma=p.far.sigma, tau=value), p.load, p.half_length)
    raise ConfigError(f"unknown sweep parameter {name!r}")
