"""Method-of-lines RK4 integration of the nonlocal equation on a fixed grid."""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .diagnostics import DiagnosticsRecord, _record
from .errors import BlowUp
from .operators import Dimension, Field, PeriodicGrid, _deriv, _rhs, fourier_eval

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimState:
    t: float
    u: Field

    def __post_init__(self):
        if not np.isfinite(self.t) or self.t < 0:
            raise ValueError(f"invalid time {self.t!r}")


@dataclass(frozen=True)
class SimConfig:
    dim: Dimension
    M: int = 256
    dt: float = 1e-3
    T_end: float = 1.0
    blowup_threshold: float = 1e6
    record_every: int = 1
    cfl_factor: float = 1.0
    adaptive: bool = False
    max_halvings: int = 30

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.T_end < 0:
            raise ValueError("T_end must be non-negative")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")

    @property
    def grid(self) -> PeriodicGrid:
        return PeriodicGrid(self.M)


def check_cfl(u0: Field, cfg: SimConfig) -> bool:
    """Advisory step-size guard; warns and returns False when violated."""
    ux = np.abs(_deriv(u0.grid, u0.values, 1)).max()
    limit = cfg.cfl_factor / max(1.0, ux * u0.grid.M)
    if cfg.dt > limit:
        warnings.warn(f"dt={cfg.dt:g} exceeds advisory CFL limit {limit:.3g}", RuntimeWarning, stacklevel=3)
        return False
    return True


def _rk4(grid: PeriodicGrid, u: np.ndarray, dt: float, a: float) -> np.ndarray:
    k1, _ = _rhs(grid, u, a)
    k2, _ = _rhs(grid, u + 0.5 * dt * k1, a)
    k3, _ = _rhs(grid, u + 0.5 * dt * k2, a)
    k4, _ = _rhs(grid, u + dt * k3, a)
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _healthy(grid, u, threshold):
    """Return ``(ok, u_x)``; ``ok`` is False on non-finite or oversized values."""
    with np.errstate(all="ignore"):
        ux = _deriv(grid, u, 1)
        ok = bool(
            np.all(np.isfinite(u))
            and np.all(np.isfinite(ux))
            and np.abs(u).max() <= threshold
            and np.abs(ux).max() <= threshold
        )
    return ok, ux


def step_rk4(s: SimState, cfg: SimConfig, dt: float | None = None) -> SimState:
    """Advance one classical RK4 step; raises :class:`BlowUp` on divergence."""
    h = cfg.dt if dt is None else dt
    grid = s.u.grid
    with np.errstate(all="ignore"):
        u = _rk4(grid, s.u.values, h, cfg.dim.a)
    ok, ux = _healthy(grid, u, cfg.blowup_threshold)
    if not ok:
        raise BlowUp(s.t + h, state=s, reason="gradient exceeded threshold or became non-finite")
    return SimState(s.t + h, s.u.with_values(u))


def evolve(
    u0: Field,
    cfg: SimConfig,
    observer: Callable[[DiagnosticsRecord], None] | None = None,
) -> tuple[SimState, list[DiagnosticsRecord]]:
    """Integrate from ``u0`` to ``cfg.T_end``.

    Diagnostics are recorded at t=0, every ``record_every`` steps and at the
    final time; ``observer`` is called with each record. On divergence a
    :class:`BlowUp` is raised carrying the last finite state, the
    ``(t, min u_x, max u_x)`` history and the records collected so far.
    """
    if u0.grid.M != cfg.M:
        raise ValueError(f"initial field has M={u0.grid.M}, config expects {cfg.M}")
    check_cfl(u0, cfg)
    grid = u0.grid
    a = cfg.dim.a
    dim = cfg.dim
    records: list[DiagnosticsRecord] = []

    def emit(t, u):
        r = _record(grid, t, u, dim)
        records.append(r)
        if observer is not None:
            observer(r)

    u = np.array(u0.values)
    t = 0.0
    dt = cfg.dt
    halvings = 0
    ux = _deriv(grid, u, 1)
    history = [(t, float(ux.min()), float(ux.max()))]
    emit(t, u)
    steps = 0
    eps = 1e-9 * dt
    while t < cfg.T_end - eps:
        h = min(dt, cfg.T_end - t)
        with np.errstate(all="ignore"):
            trial = _rk4(grid, u, h, a)
        ok, ux = _healthy(grid, trial, cfg.blowup_threshold)
        if not ok:
            if cfg.adaptive and halvings < cfg.max_halvings:
                dt *= 0.5
                halvings += 1
                log.debug("step failed at t=%.6g, halving dt to %.3g", t, dt)
                continue
            err = BlowUp(t + h, state=SimState(t, u0.with_values(u)), history=history,
                         reason=f"|u_x| > {cfg.blowup_threshold:g} or non-finite")
            err.records = records
            raise err
        u = trial
        t += h
        steps += 1
        history.append((t, float(ux.min()), float(ux.max())))
        if steps % cfg.record_every == 0:
            emit(t, u)
    if not records or records[-1].t != t:
        emit(t, u)
    return SimState(t, u0.with_values(u)), records


@dataclass
class ConvergenceTable:
    """L-infinity errors of each run against a reference solution."""

    label: str
    params: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    def orders(self) -> list[float]:
        """Observed orders from consecutive error ratios (log base 2)."""
        e = self.errors
        return [float(np.log2(e[i] / e[i + 1])) for i in range(len(e) - 1) if e[i + 1] > 0]

    def strictly_decreasing(self) -> bool:
        return all(b < a for a, b in zip(self.errors, self.errors[1:]))


def convergence_study(u0_gen: Callable[[PeriodicGrid], Field], cfg: SimConfig, Ms) -> ConvergenceTable:
    """Spatial self-convergence: compare runs on each M with the largest M.

    The largest entry of ``Ms`` serves as reference; the returned table lists
    the remaining grid sizes with their L-infinity errors at ``T_end``.
    """
    Ms = list(Ms)
    if any(b <= a for a, b in zip(Ms, Ms[1:])):
        raise ValueError("grid sizes must be strictly increasing")
    ref_M = Ms[-1]
    finals = {}
    for M in Ms:
        c = replace(cfg, M=M, record_every=10**9)
        s, _ = evolve(u0_gen(PeriodicGrid(M)), c)
        finals[M] = s.u.values
    table = ConvergenceTable("space")
    for M in Ms[:-1]:
        ref_on_coarse = fourier_eval(finals[ref_M], PeriodicGrid(M).x)
        table.params.append(M)
        table.errors.append(float(np.abs(ref_on_coarse - finals[M]).max()))
    return table


def temporal_study(u0: Field, cfg: SimConfig, dts) -> ConvergenceTable:
    """Richardson-style temporal study: differences between successive step sizes.

    ``errors[i] = |u(dt_i) - u(dt_{i+1})|_inf``; with halving step sizes the
    ratios of consecutive entries approach ``2^order``.
    """
    dts = list(dts)
    finals = []
    for dt in dts:
        s, _ = evolve(u0, replace(cfg, dt=dt, record_every=10**9))
        finals.append(s.u.values)
    table = ConvergenceTable("time")
    for i in range(len(dts) - 1):
        table.params.append(dts[i])
        table.errors.append(float(np.abs(finals[i] - finals[i + 1]).max()))
    return table
