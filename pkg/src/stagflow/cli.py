"""Batch front end: ``stagflow <command> [--config cfg.json] [--n 3 --M 256 ...]``.

Every command writes ``summary.json`` (with ``"schema": 1``) into the output
directory, plus command-specific CSV files and, unless disabled, SVG plots.

Exit codes: 0 success, 1 invalid configuration, 2 blow-up detected (summary
still written), 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .diagnostics import drift_report, record, write_csv
from .errors import BlowUp, DimensionUnsupported, FlowDegenerate, PhaseCollapse, StagflowError
from .eulerian import SimConfig, convergence_study, evolve, temporal_study
from .operators import Dimension, Field, PeriodicGrid, deriv, fourier_eval, rhs_eq3

log = logging.getLogger("stagflow")

SCHEMA = 1
EXIT_OK, EXIT_CONFIG, EXIT_BLOWUP, EXIT_NUMERIC = 0, 1, 2, 3
COMMANDS = ("simulate", "lagrangian", "twophase", "separable", "lift-check", "convergence", "sweep")
PRESETS = ("zero", "sine", "two-mode", "random-bandlimited")

DEFAULTS = {
    "n": 3.0,
    "M": 256,
    "dt": 1e-3,
    "T_end": 1.0,
    "record_every": 10,
    "u0": {"preset": "sine", "amplitude": 0.5},
    "threshold": 1e6,
    "adaptive": False,
    "out": "out",
    "plots": True,
}

COMMAND_DEFAULTS = {
    "twophase": {"n": 3.0, "p0": 1.0, "q0": -1.0, "phi0": 0.2, "psi0": 0.7, "dt": 2e-3, "T_end": 50.0,
                 "record_every": 10},
    "separable": {"n": 5.0, "lam": 1.0, "T0": 1.0, "times": [0.0, 0.25, 0.5, 0.75, 0.99]},
    "lift-check": {"T_end": 0.5, "points": 100, "seed": 0, "radius": 1.0},
    "convergence": {"T_end": 0.5, "Ms": [32, 64, 128, 256], "dts": [0.02, 0.01, 0.005, 0.0025],
                    "u0_time": {"preset": "sine", "amplitude": 0.1}},
    "sweep": {"axes": {"n": [2.0, 3.0], "amplitude": [2.0]}, "T_end": 5.0, "record_every": 100},
}


class ConfigError(ValueError):
    """Raised for configurations that do not parse or validate."""


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")

    def get(self, key):
        if key in self.params:
            return self.params[key]
        return COMMAND_DEFAULTS.get(self.command, {}).get(key, DEFAULTS.get(key))


# ---------------------------------------------------------------- configuration

def _num(cfg: RunConfig, key: str, kind=float, positive=False):
    v = cfg.get(key)
    try:
        v = kind(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a number, got {v!r}") from None
    if kind is float and not math.isfinite(v):
        raise ConfigError(f"{key} must be finite")
    if positive and not v > 0:
        raise ConfigError(f"{key} must be positive")
    return v


def dimension(cfg: RunConfig) -> Dimension:
    try:
        return Dimension(_num(cfg, "n"))
    except ValueError as e:
        raise ConfigError(str(e)) from None


def sim_config(cfg: RunConfig) -> SimConfig:
    M = _num(cfg, "M", int, positive=True)
    if M < 8 or M % 2:
        raise ConfigError("M must be even and at least 8")
    T = _num(cfg, "T_end")
    if T < 0:
        raise ConfigError("T_end must be non-negative")
    return SimConfig(
        dim=dimension(cfg), M=M, dt=_num(cfg, "dt", positive=True), T_end=T,
        blowup_threshold=_num(cfg, "threshold", positive=True),
        record_every=_num(cfg, "record_every", int, positive=True),
        adaptive=bool(cfg.get("adaptive")),
    )


def build_u0(spec, grid: PeriodicGrid) -> Field:
    """Initial datum from a preset (``zero``, ``sine``, ``two-mode``,
    ``random-bandlimited``) or an inline list of ``[k, cos_coeff, sin_coeff]``."""
    if isinstance(spec, str):
        spec = {"preset": spec}
    if not isinstance(spec, dict):
        raise ConfigError("u0 must be a preset name or an object")
    x = grid.x
    if "coeffs" in spec:
        v = np.zeros(grid.M)
        try:
            for k, a, b in spec["coeffs"]:
                k = int(k)
                if k < 1 or 2 * k >= grid.M:
                    raise ConfigError(f"wavenumber {k} outside 1..{grid.M // 2 - 1}")
                v += float(a) * np.cos(2 * np.pi * k * x) + float(b) * np.sin(2 * np.pi * k * x)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"bad coefficient list: {e}") from None
        return Field(grid, v)
    preset = spec.get("preset", "sine")
    amp = float(spec.get("amplitude", 0.5))
    if preset == "zero":
        v = np.zeros(grid.M)
    elif preset == "sine":
        v = amp * np.sin(2 * np.pi * x)
    elif preset == "two-mode":
        v = amp * (np.sin(2 * np.pi * x) + 0.5 * np.cos(4 * np.pi * x))
    elif preset == "random-bandlimited":
        rng = np.random.default_rng(int(spec.get("seed", 0)))
        K = int(spec.get("modes", 6))
        if K < 1 or 2 * K >= grid.M:
            raise ConfigError("modes out of range for the grid")
        c = (rng.standard_normal(K) + 1j * rng.standard_normal(K)) / np.arange(1, K + 1) ** 2
        # evaluate the same continuous profile on any grid
        k = np.arange(1, K + 1)
        v = np.real(np.exp(2j * np.pi * np.outer(x, k)) @ c)
        v *= amp / np.abs(v).max()
    else:
        raise ConfigError(f"unknown u0 preset {preset!r}; choose from {', '.join(PRESETS)}")
    return Field(grid, v)


def load_config(command: str, path=None, overrides: dict | None = None) -> RunConfig:
    params = {}
    if path is not None:
        try:
            with open(path) as fh:
                params = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {path}: {e}") from None
        if not isinstance(params, dict):
            raise ConfigError("config file must contain a JSON object")
    params.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig(command, params)


# ---------------------------------------------------------------- output

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_summary(out: Path, summary: dict) -> None:
    data = {"schema": SCHEMA, "version": __version__, **summary}
    (out / "summary.json").write_text(json.dumps(_jsonable(data), indent=2, sort_keys=True) + "\n")


def _plot(out: Path, name: str, series: dict, xlabel: str, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "stagflow"
    (out / "plots").mkdir(exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, (xs, ys) in series.items():
        ax.plot(xs, ys, label=label)
    ax.set_xlabel(xlabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out / "plots" / f"{name}.svg", format="svg", metadata={"Date": None})
    plt.close(fig)


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.get("out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------- commands

def _simulate(cfg: RunConfig, out: Path | None):
    sc = sim_config(cfg)
    dim = sc.dim
    u0 = build_u0(cfg.get("u0"), sc.grid)
    summary = {"command": "simulate", "params": cfg.params, "n": dim.n, "blowup": {"flag": False, "t": None}}
    code = EXIT_OK
    try:
        state, records = evolve(u0, sc)
        final = state.u
    except BlowUp as e:
        records = e.records
        final = e.state.u
        summary["blowup"] = {"flag": True, "t": e.t, "reason": e.reason,
                             "last_min_dxu": e.history[-1][1], "last_max_dxu": e.history[-1][2]}
        code = EXIT_BLOWUP
    drift = drift_report(records, dim)
    summary["drifts"] = drift.to_dict()
    summary["t_final"] = records[-1].t
    summary["max_grad"] = max(max(abs(r.min_dxu), abs(r.max_dxu)) for r in records)
    summary["checks"] = {
        "mean_conserved": drift.mean_drift_abs <= 1e-10,
        "c1_within_bound": None if drift.c1_bound is None else drift.c1_status == "ok",
        "uxx_norm_conserved": drift.uxx_drift_rel <= 1e-5 if dim.n > 3 and code == EXIT_OK else None,
    }
    if out is not None:
        write_csv(out / "diagnostics.csv", records)
        if cfg.get("plots"):
            x = u0.grid.x
            _plot(out, "snapshots", {"t=0": (x, u0.values), f"t={records[-1].t:.4g}": (x, final.values)},
                  "x", "u(x, t)")
            ts = [r.t for r in records]
            _plot(out, "invariants", {
                "mean u": (ts, [r.mean_u for r in records]),
                "C1 norm": (ts, [r.c1_norm_u for r in records]),
                "u_xx norm": (ts, [r.uxx_norm for r in records]),
            }, "t", "diagnostics")
    return code, summary, final


def cmd_simulate(cfg: RunConfig) -> tuple[int, dict]:
    out = _outdir(cfg)
    code, summary, _ = _simulate(cfg, out)
    return code, summary


def cmd_lagrangian(cfg: RunConfig) -> tuple[int, dict]:
    from .lagrangian import (eulerian_velocity, evolve_flow, flow_jacobian, jacobian_from_integral,
                             transported_uxx, uxx_along_flow)

    out = _outdir(cfg)
    sc = sim_config(cfg)
    dim = sc.dim
    u0 = build_u0(cfg.get("u0"), sc.grid)
    states = evolve_flow(u0, sc)
    u0xx = deriv(u0, 2)
    records, rows = [], []
    for fs in states:
        u = eulerian_velocity(fs)
        records.append(record(fs.t, u, dim))
        jac = flow_jacobian(fs)
        jac_err = float(np.abs(jac.values - jacobian_from_integral(fs).values).max())
        tr_err = float(np.abs(uxx_along_flow(fs).values - transported_uxx(fs, u0xx, dim).values).max())
        rows.append([fs.t, float(jac.values.min()), float(jac.values.max()), jac_err, tr_err])
    final_u = eulerian_velocity(states[-1])
    eul, _ = evolve(u0, replace(sc, record_every=10**9))
    diff = float(np.abs(eul.u.values - final_u.values).max())
    write_csv(out / "diagnostics.csv", records)
    with open(out / "flow.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "min_jacobian", "max_jacobian", "jacobian_route_diff", "transport_error"])
        w.writerows([[repr(float(v)) for v in r] for r in rows])
    summary = {
        "command": "lagrangian", "params": cfg.params, "n": dim.n, "t_final": states[-1].t,
        "eulerian_difference": diff,
        "max_transport_error": max(r[4] for r in rows),
        "max_jacobian_route_diff": max(r[3] for r in rows),
        "min_jacobian": min(r[1] for r in rows),
        "checks": {"cross_validation": diff <= 1e-3},
    }
    if cfg.get("plots"):
        x = sc.grid.x
        _plot(out, "snapshots", {"eulerian": (x, eul.u.values), "lagrangian": (x, final_u.values)},
              "x", f"u(x, {states[-1].t:.4g})")
        _plot(out, "displacement", {f"t={fs.t:.3g}": (x, fs.displacement) for fs in states[:: max(1, len(states) // 5)]},
              "label", "gamma - x")
    return EXIT_OK, summary


def cmd_twophase(cfg: RunConfig) -> tuple[int, dict]:
    from . import twophase as tp

    out = _outdir(cfg)
    dim = dimension(cfg)
    dt = _num(cfg, "dt", positive=True)
    T = _num(cfg, "T_end")
    try:
        s0 = tp.TwoPhaseState.initial(_num(cfg, "p0"), _num(cfg, "q0"), _num(cfg, "phi0"), _num(cfg, "psi0"), dim)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    every = _num(cfg, "record_every", int, positive=True)
    series = tp.evolve_twophase(s0, dt, T, record_every=every)
    tp.write_csv(out / "diagnostics.csv", series)
    last = series[-1]
    summary = {
        "command": "twophase", "params": cfg.params, "n": dim.n, "t_final": last.t,
        "phi_limit": tp.limit_phase(s0), "int_p_limit": tp.limit_int_p(s0),
        "phi_final": last.phi, "psi_final": last.psi, "int_p_final": last.int_p,
        "p_final": last.p, "q_final": last.q,
        "max_N_residual": max(abs(s.N) for s in series),
        "max_partition_residual": max(abs(tp.partition_residual(s0, s)) for s in series),
    }
    if len(series) >= 5 and len({round(b.t - a.t, 12) for a, b in zip(series, series[1:])}) == 1:
        summary["interface_speed_error"] = tp.rh_check(series)
    if s0.p > 0 > s0.q:
        r, _ = tp.polar_oracle(s0, last.t)
        summary["polar_relative_error"] = abs(math.hypot(last.p, last.q) - r) / r
    summary["checks"] = {
        "N_residual": summary["max_N_residual"] <= 1e-12,
        "partition": summary["max_partition_residual"] <= 1e-8,
    }
    if cfg.get("plots"):
        ts = [s.t for s in series]
        _plot(out, "phases", {"phi": (ts, [s.phi for s in series]), "psi": (ts, [s.psi for s in series])},
              "t", "interfaces")
        _plot(out, "slopes", {"p": (ts, [s.p for s in series]), "q": (ts, [s.q for s in series])}, "t", "slopes")
    return EXIT_OK, summary


def cmd_separable(cfg: RunConfig) -> tuple[int, dict]:
    from .separable import BlowUpAt, SeparableConfig, exact_derivative_identity, implied_lambda, riccati_T

    out = _outdir(cfg)
    lam, T0 = _num(cfg, "lam"), _num(cfg, "T0")
    times = [float(t) for t in cfg.get("times")]
    rows = []
    t_star = None
    for t in times:
        v = riccati_T(lam, T0, t)
        if isinstance(v, BlowUpAt):
            t_star = v.t_star
            rows.append([t, "blowup"])
        else:
            rows.append([t, repr(float(v))])
    if t_star is None and lam * T0 > 0:
        t_star = 1.0 / (lam * T0)
    with open(out / "riccati.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "T"])
        w.writerows(rows)
    summary = {"command": "separable", "params": cfg.params, "lam": lam, "T0": T0, "t_star": t_star}
    dim = dimension(cfg)
    if dim.n > 3:
        M = _num(cfg, "M", int, positive=True)
        X = build_u0(cfg.get("u0"), PeriodicGrid(M))
        summary["identity_integral"] = exact_derivative_identity(X, dim)
        if np.abs(deriv(X, 2).values).max() > 0:
            le, bound = implied_lambda(SeparableConfig(lam, T0, X, dim))
            summary["implied_lambda"] = le
            summary["implied_lambda_bound"] = bound
    return EXIT_OK, summary


def cmd_lift_check(cfg: RunConfig) -> tuple[int, dict]:
    from .lift import residual_report, sample_points

    out = _outdir(cfg)
    dim = dimension(cfg)
    if not dim.is_integer:
        raise DimensionUnsupported(f"lifting needs an integer dimension, got n={dim.n}")
    code, summary, final = _simulate(cfg, None)
    if code != EXIT_OK:
        summary["command"] = "lift-check"
        return code, summary
    rng = np.random.default_rng(_num(cfg, "seed", int))
    pts = sample_points(int(dim.n), _num(cfg, "points", int, positive=True), rng, radius=_num(cfg, "radius"))
    rep = residual_report(final, rhs_eq3(final, dim), dim, pts)
    (out / "lift_report.json").write_text(rep.to_json() + "\n")
    summary.update({
        "command": "lift-check", "max_residual": rep.max_residual, "mean_residual": rep.mean_residual,
        "max_divergence": rep.max_divergence,
    })
    summary["checks"] = {"divergence": rep.max_divergence <= 1e-8, "momentum": rep.max_residual <= 1e-4}
    return EXIT_OK, summary


def cmd_convergence(cfg: RunConfig) -> tuple[int, dict]:
    out = _outdir(cfg)
    sc = sim_config(cfg)
    spec = cfg.get("u0")
    Ms = [int(m) for m in cfg.get("Ms")]
    dts = [float(d) for d in cfg.get("dts")]
    space = convergence_study(lambda g: build_u0(spec, g), sc, Ms) if len(Ms) >= 2 else None
    # large steps need a gentler datum than the spatial study
    time = temporal_study(build_u0(cfg.get("u0_time"), sc.grid), sc, dts) if len(dts) >= 3 else None
    with open(out / "convergence.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["study", "param", "error"])
        for tab in (space, time):
            if tab is not None:
                w.writerows([[tab.label, repr(p), repr(e)] for p, e in zip(tab.params, tab.errors)])
    summary = {"command": "convergence", "params": cfg.params}
    if space is not None:
        summary["space"] = {"M": space.params, "errors": space.errors,
                            "strictly_decreasing": space.strictly_decreasing()}
    if time is not None:
        summary["time"] = {"dt": time.params, "differences": time.errors, "orders": time.orders()}
    return EXIT_OK, summary


SWEEP_COLUMNS = ("n", "amplitude", "M", "status", "blowup", "t_end", "max_grad", "error_vs_finest", "message")


def _sweep_cell(params: dict) -> dict:
    """Run one sweep cell; never raises."""
    cell = {"n": params["n"], "amplitude": params["amplitude"], "M": params["M"]}
    try:
        cfg = RunConfig("simulate", params)
        code, summary, final = _simulate(cfg, None)
        cell.update(status="blowup" if code == EXIT_BLOWUP else "completed",
                    blowup=code == EXIT_BLOWUP, t_end=summary["t_final"] if code == EXIT_OK else summary["blowup"]["t"],
                    max_grad=summary["max_grad"], final=final.values.tolist(), message="")
    except Exception as e:  # a failed cell is recorded, not fatal
        cell.update(status="failed", blowup=False, t_end=None, max_grad=None, final=None,
                    message=f"{type(e).__name__}: {e}")
    return cell


def sweep(base: RunConfig, axes: dict, workers: int | None = None) -> list[dict]:
    """Cartesian sweep over ``n``, ``amplitude`` and ``M``; one row per cell.

    Cells sharing ``n`` and ``amplitude`` that all completed are compared with
    the finest grid in their group (``error_vs_finest``).
    """
    unknown = set(axes) - {"n", "amplitude", "M"}
    if unknown:
        raise ConfigError(f"unknown sweep axes {sorted(unknown)}")
    spec = base.get("u0")
    if isinstance(spec, str):
        spec = {"preset": spec}
    values = {
        "n": axes.get("n", [base.get("n")]),
        "amplitude": axes.get("amplitude", [spec.get("amplitude", 0.5)]),
        "M": axes.get("M", [base.get("M")]),
    }
    if any(len(v) == 0 for v in values.values()):
        return []
    cells = []
    for n, amp, M in itertools.product(values["n"], values["amplitude"], values["M"]):
        p = {**DEFAULTS, **COMMAND_DEFAULTS["sweep"], **base.params}
        p.pop("axes", None)
        p.update(n=float(n), M=int(M), u0={**spec, "amplitude": float(amp)}, amplitude=float(amp), plots=False)
        cells.append(p)
    if workers is None:
        workers = int(os.environ.get("TOOL_WORKERS", os.cpu_count() or 1))
    workers = max(1, min(workers, len(cells)))
    if workers == 1:
        rows = [_sweep_cell(p) for p in cells]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    groups: dict = {}
    for r in rows:
        groups.setdefault((r["n"], r["amplitude"]), []).append(r)
    for group in groups.values():
        done = [r for r in group if r["status"] == "completed"]
        finest = max(done, key=lambda r: r["M"]) if done else None
        for r in group:
            r["error_vs_finest"] = None
            if finest is not None and r is not finest and r["status"] == "completed":
                ref = fourier_eval(np.array(finest["final"]), PeriodicGrid(r["M"]).x)
                r["error_vs_finest"] = float(np.abs(ref - np.array(r["final"])).max())
    for r in rows:
        r.pop("final", None)
    return rows


def write_sweep_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in rows:
            w.writerow(["" if r.get(c) is None else (repr(r[c]) if isinstance(r[c], float) else r[c])
                        for c in SWEEP_COLUMNS])


def cmd_sweep(cfg: RunConfig) -> tuple[int, dict]:
    out = _outdir(cfg)
    axes = cfg.get("axes")
    if not isinstance(axes, dict):
        raise ConfigError("axes must be an object mapping axis name to a list of values")
    rows = sweep(cfg, axes)
    write_sweep_csv(out / "sweep.csv", rows)
    summary = {"command": "sweep", "params": cfg.params, "cells": rows,
               "failed_cells": sum(r["status"] == "failed" for r in rows)}
    return EXIT_OK, summary


HANDLERS = {
    "simulate": cmd_simulate,
    "lagrangian": cmd_lagrangian,
    "twophase": cmd_twophase,
    "separable": cmd_separable,
    "lift-check": cmd_lift_check,
    "convergence": cmd_convergence,
    "sweep": cmd_sweep,
}


def run(cfg: RunConfig) -> int:
    """Execute a command; returns the exit status. ``summary.json`` is always attempted."""
    out = None
    try:
        out = _outdir(cfg)
        code, summary = HANDLERS[cfg.command](cfg)
        summary["status"] = {EXIT_OK: "ok", EXIT_BLOWUP: "blowup"}.get(code, "error")
    except (ConfigError, DimensionUnsupported) as e:
        code, summary = EXIT_CONFIG, {"command": cfg.command, "status": "invalid config", "error": str(e)}
    except (FlowDegenerate, PhaseCollapse, StagflowError, FloatingPointError, np.linalg.LinAlgError) as e:
        code, summary = EXIT_NUMERIC, {"command": cfg.command, "status": "numerical failure",
                                       "error": f"{type(e).__name__}: {e}"}
    except OSError as e:
        code, summary = EXIT_CONFIG, {"command": cfg.command, "status": "invalid config", "error": str(e)}
    if out is not None:
        write_summary(out, summary)
    if code != EXIT_OK:
        log.warning("%s finished with status %s", cfg.command, summary.get("status"))
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stagflow", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with parameters")
        p.add_argument("--n", type=float)
        p.add_argument("--M", type=int)
        p.add_argument("--dt", type=float)
        p.add_argument("--T", dest="T_end", type=float)
        p.add_argument("--out")
        p.add_argument("--no-plots", dest="plots", action="store_const", const=False)
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    overrides = {k: getattr(args, k) for k in ("n", "M", "dt", "T_end", "out", "plots")}
    try:
        cfg = load_config(args.command, args.config, overrides)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
