"""
Command-line front end.

    stcrack solve     --config configs/tension_identical.yaml --out out/run
    stcrack verify    --config configs/tension_identical.yaml
    stcrack sweep     --config configs/sweep_nu1.yaml
    stcrack reference --config configs/pressure_reference.yaml

Exit codes: 0 ok, 1 configuration error, 2 numerical failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import LOAD_KEYS, ConfigError, RunConfig, load_config, problem_to_dict, with_parameter
from .model import Problem, ProblemError, SurfaceTension
from .numerics import ConvergenceError, TruncationError
from .postprocess import (
    EnglandReference,
    boundary_stresses,
    crack_opening,
    fit_singularity,
    max_stress_scan,
    pressure_problem,
)
from .spline import compare, solve_spline
from .taylor import layout, residual, solve

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3

#: crack opening is compared on this many equally spaced interior points
VERIFY_POINTS = 11


class VerificationError(RuntimeError):
    pass


def _fmt(v) -> str:
    return format(float(v) + 0.0, ".12g")  # no "-0"


def write_csv(path: Path, header, columns):
    cols = [np.asarray(c, dtype=float) for c in columns]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*cols):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_json(path: Path, obj):
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, allow_nan=True)
        fh.write("\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(out: Path, files, info: dict):
    info = dict(info)
    info["version"] = __version__
    info["files"] = {f.name: _sha256(f) for f in sorted(files)}
    write_json(out / "manifest.json", info)


def crack_points(l, n):
    return np.linspace(-l, l, n)


def stress_points(l, n):
    # tips excluded: the boundary conditions hold on the open crack
    return np.linspace(-l, l, n + 2)[1:-1]


def _fit_dict(f):
    return {
        "tip": f.tip,
        "k1": f.k1,
        "k2": f.k2,
        "c_plus": list(f.c_plus),
        "c_minus": list(f.c_minus),
        "s22_log2": list(f.s22_log2),
        "s22_bounded": f.s22_bounded,
        "window": list(f.window),
        "fit_residual": f.fit_residual,
        "k1_halved_window": f.k1_halved,
        "k2_halved_window": f.k2_halved,
        "window_sensitivity": f.window_sensitivity,
    }


# -- workflows ------------------------------------------------------------------


def run_solve(cfg: RunConfig, out: Path) -> dict:
    p, N = cfg.problem, cfg.order
    out.mkdir(parents=True, exist_ok=True)
    s = solve(p, N)
    l = p.half_length
    files = []

    sl = layout(N)
    vec = s.to_vector()
    names, idx, powers = [], [], []
    for name, part in sl.items():
        n = part.stop - part.start
        names += [name] * n
        idx += list(range(n))
        powers += list(range(1, n + 1)) if name in ("a3", "b3") else list(range(n))
    coef_path = out / "coefficients.csv"
    with open(coef_path, "w", newline="\n") as fh:
        fh.write("block,index,power,value\n")
        for b, i, k, v in zip(names, idx, powers, vec):
            sign = "-" if b in ("a3", "b3") else ""
            fh.write(f"{b},{i},{sign}{k},{_fmt(v)}\n")
    files.append(coef_path)

    x = crack_points(l, cfg.sample_count)
    up, um = crack_opening(s, x)
    path = out / "crack_shape.csv"
    write_csv(path, ["x", "u2_plus", "u2_minus"], [x, up, um])
    files.append(path)

    xs = stress_points(l, cfg.sample_count)
    sig = boundary_stresses(p, s, xs)
    path = out / "face_stresses.csv"
    write_csv(
        path,
        ["x", "s12_plus", "s12_minus", "s22_plus", "s22_minus"],
        [xs, sig["s12_plus"], sig["s12_minus"], sig["s22_plus"], sig["s22_minus"]],
    )
    files.append(path)

    fits = {}
    if p.st.g1_plus != 0 and p.st.g1_minus != 0:
        for name, tip in (("right", l), ("left", -l)):
            fits[name] = _fit_dict(fit_singularity(p, s, tip))
    else:
        fits["skipped"] = "face curvature constants g1 are zero"
    mx = max_stress_scan(p, s)
    fits["maxima"] = {"values": mx.values, "locations": mx.locations}
    path = out / "singularity.json"
    write_json(path, fits)
    files.append(path)

    r = residual(p, s)
    summary = {
        "workflow": "solve",
        "problem": problem_to_dict(p),
        "order": N,
        "dimension": 6 * N + 10,
        "condition_estimate": s.condition_estimate,
        "residuals": {"equations": list(r.equations), "constraints": list(r.constraints),
                      "shear_traction_dtn": r.shear_traction_dtn},
        "closure": float(up[-1] - um[-1]),
    }
    write_manifest(out, files, summary)
    return summary


def opening_discrepancy(l, a, b, n=VERIFY_POINTS):
    """Relative L-infinity distance of two crack openings on `n` interior points."""
    x = np.linspace(-l, l, n + 2)[1:-1]
    return compare(a, b, x).opening_linf


def run_verify(cfg: RunConfig, out: Path) -> dict:
    p, N = cfg.problem, cfg.order
    q = cfg.verify_problem or p
    out.mkdir(parents=True, exist_ok=True)
    if q.half_length != p.half_length:
        raise VerificationError("verification problems have different crack lengths")
    t = solve(p, N)
    t2 = solve(q, N + 20)
    sp = solve_spline(q, N)
    l = p.half_length
    d_taylor = opening_discrepancy(l, t, t2)
    d_spline = opening_discrepancy(l, t, sp)

    x = crack_points(l, cfg.sample_count)
    u = crack_opening(t, x)
    u2 = crack_opening(t2, x)
    path = out / "verify_curves.csv"
    write_csv(
        path,
        ["x", "opening_taylor", "opening_taylor_refined", "opening_spline"],
        [x, u[0] - u[1], u2[0] - u2[1], sp.displacement(1, x) - sp.displacement(2, x)],
    )
    summary = {
        "workflow": "verify",
        "problem": problem_to_dict(p),
        "order": N,
        "refined_order": N + 20,
        "metric": f"relative max-norm crack-opening difference on {VERIFY_POINTS} interior points",
        "taylor_vs_taylor": d_taylor,
        "taylor_vs_spline": d_spline,
        "tolerance_taylor": cfg.tolerance_taylor,
        "tolerance_spline": cfg.tolerance_spline,
        "passed": bool(d_taylor <= cfg.tolerance_taylor and d_spline <= cfg.tolerance_spline),
        "condition_estimates": {
            "taylor": t.condition_estimate,
            "taylor_refined": t2.condition_estimate,
            "spline": sp.report.condition_estimate,
        },
    }
    write_manifest(out, [path], summary)
    return summary


SWEEP_COLUMNS = ["value", "max_s22_plus", "max_s22_minus", "max_s12_plus", "max_s12_minus", "k1", "k2", "ok"]


def sweep_rows(p: Problem, name: str, values, N: int):
    """One row per step; failed steps carry NaN and ok = 0."""
    rows, failures = [], {}
    for v in values:
        try:
            q = with_parameter(p, name, float(v))
            s = solve(q, N)
            m = max_stress_scan(q, s)
            f = fit_singularity(q, s)
            rows.append([v, m["s22_plus"], m["s22_minus"], m["s12_plus"], m["s12_minus"], f.k1, f.k2, 1])
        except (ProblemError, np.linalg.LinAlgError, TruncationError, ConvergenceError, ValueError) as e:
            failures[_fmt(v)] = f"{type(e).__name__}: {e}"
            rows.append([v] + [np.nan] * 6 + [0])
    return np.array(rows, dtype=float), failures


def run_sweep(cfg: RunConfig, out: Path) -> dict:
    if cfg.sweep is None:
        raise ConfigError("sweep workflow needs a 'sweep' block")
    out.mkdir(parents=True, exist_ok=True)
    sw = cfg.sweep
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows, failures = sweep_rows(cfg.problem, sw.parameter, sw.values(), cfg.order)
    path = out / "sweep.csv"
    write_csv(path, SWEEP_COLUMNS, rows.T)
    summary = {
        "workflow": "sweep",
        "problem": problem_to_dict(cfg.problem),
        "order": cfg.order,
        "sweep": {"parameter": sw.parameter, "start": sw.start, "stop": sw.stop,
                  "steps": sw.steps, "spacing": sw.spacing},
        "failed_steps": failures,
    }
    write_manifest(out, [path], summary)
    return summary


def _gamma_label(g):
    return "g" + format(g, "g")


def run_reference(cfg: RunConfig, out: Path) -> dict:
    p = cfg.problem
    loaded = any(np.any(getattr(p.load, k) != 0) for k in LOAD_KEYS)
    if p.far.sigma != 0 or p.far.tau != 0 or loaded:
        raise ConfigError("reference runs apply a uniform pressure; remove far_field and crack_load")
    out.mkdir(parents=True, exist_ok=True)
    l, T = p.half_length, cfg.pressure
    ref = EnglandReference.build(p.mat1, p.mat2, T, l)
    x = crack_points(l, cfg.sample_count)
    header = ["x", "classical_u2_plus", "classical_u2_minus"]
    cols = [x, ref.u2_plus(x), ref.u2_minus(x)]
    conds = {}
    for g in dict.fromkeys(cfg.gammas):
        if g == 0:
            continue
        q = pressure_problem(p.mat1, p.mat2, SurfaceTension.uniform(g), T, l)
        s = solve(q, cfg.order)
        up, um = crack_opening(s, x)
        lab = _gamma_label(g)
        header += [f"u2_plus_{lab}", f"u2_minus_{lab}"]
        cols += [up, um]
        conds[lab] = s.condition_estimate
    path = out / "reference.csv"
    write_csv(path, header, cols)
    summary = {
        "workflow": "reference",
        "problem": problem_to_dict(p),
        "order": cfg.order,
        "pressure": T,
        "gammas": list(cfg.gammas),
        "england": {"alpha": ref.alpha_e, "gamma": ref.gamma_e},
        "condition_estimates": conds,
    }
    write_manifest(out, [path], summary)
    return summary


WORKFLOWS = {"solve": run_solve, "verify": run_verify, "sweep": run_sweep, "reference": run_reference}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stcrack", description="Interface crack with surface tension")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in WORKFLOWS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="YAML or JSON run configuration")
        sp.add_argument("--out", help="output directory (overrides 'outputs')")
        sp.add_argument("--order", type=int, help="Taylor order N")
        sp.add_argument("--samples", type=int, help="points per output curve")
        sp.add_argument("--tolerance-taylor", type=float)
        sp.add_argument("--tolerance-spline", type=float)
    return ap


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    kw = {}
    if args.order is not None:
        if args.order < 2:
            raise ConfigError("--order must be >= 2")
        kw["order"] = args.order
    if args.samples is not None:
        if args.samples < 2:
            raise ConfigError("--samples must be >= 2")
        kw["sample_count"] = args.samples
    if args.tolerance_taylor is not None:
        kw["tolerance_taylor"] = args.tolerance_taylor
    if args.tolerance_spline is not None:
        kw["tolerance_spline"] = args.tolerance_spline
    if args.out is not None:
        kw["outputs"] = args.out
    return replace(cfg, **kw) if kw else cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cfg = _apply_overrides(load_config(args.config), args)
            summary = WORKFLOWS[args.command](cfg, Path(cfg.outputs))
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, TruncationError, ConvergenceError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except VerificationError as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFY

    if args.command == "verify":
        print(
            f"taylor N={summary['order']} vs N={summary['refined_order']}: "
            f"{summary['taylor_vs_taylor']:.3e} (tol {summary['tolerance_taylor']:.1e}); "
            f"taylor vs spline: {summary['taylor_vs_spline']:.3e} (tol {summary['tolerance_spline']:.1e})"
        )
        if not summary["passed"]:
            return EXIT_VERIFY
    elif args.command == "sweep" and summary["failed_steps"]:
        for v, msg in summary["failed_steps"].items():
            print(f"step {v} failed: {msg}", file=sys.stderr)
        return EXIT_NUMERIC
    else:
        print(f"{args.command}: wrote {cfg.outputs}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
