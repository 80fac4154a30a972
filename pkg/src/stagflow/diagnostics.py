"""Conserved and bounded quantities of the evolution, recorded as time series.

For ``n >= 3`` the Lebesgue norm of ``u_xx`` with exponent ``(n-1)/(n-3)``
(sup norm at ``n = 3``) is constant in time, and the C^1 norm of ``u`` is bounded
by norms of the initial datum. The helpers here measure how well a discrete
run respects those facts.
"""
from __future__ import annotations

import csv
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import DimensionUnsupported
from .operators import Dimension, Field, PeriodicGrid, _deriv, _rhs

CSV_COLUMNS = ("t", "mean_u", "min_dxu", "max_dxu", "c1_norm_u", "uxx_norm", "f_value", "dt_u_sup")
BOUND_SLACK = 1e-3


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Invariant values at one instant.

    ``uxx_norm`` is the conserved norm for ``n >= 3``; for ``n < 3`` no norm of
    ``u_xx`` is conserved and the sup norm is stored instead.
    """

    t: float
    mean_u: float
    min_dxu: float
    max_dxu: float
    c1_norm_u: float
    uxx_norm: float
    f_value: float
    dt_u_sup: float

    def as_row(self) -> list[str]:
        return [repr(float(getattr(self, c))) for c in CSV_COLUMNS]


def _lp(v: np.ndarray, p: float) -> float:
    if np.isinf(p):
        return float(np.max(np.abs(v)))
    return float(np.mean(np.abs(v) ** p) ** (1.0 / p))


def uxx_norm(u: Field, dim: Dimension) -> float:
    """Norm of ``u_xx`` that is conserved in time for dimension ``n >= 3``."""
    if dim.n < 3:
        raise DimensionUnsupported(f"no conserved norm of u_xx for n={dim.n} < 3")
    return _lp(_deriv(u.grid, u.values, 2), dim.conserved_p)


def lp_functional(u: Field, p: float) -> float:
    """``integral |u_xx|^p dx`` for an arbitrary exponent (no normalisation)."""
    uxx = _deriv(u.grid, u.values, 2)
    return float(np.mean(np.abs(uxx) ** p))


def int2p_defect(u: Field, dim: Dimension, p: float) -> float:
    r"""Predicted rate ``d/dt \int |u_xx|^p`` for a smooth solution.

    Equals ``-(p (n-3)/(n-1) - 1) \int u_x |u_xx|^p``; it vanishes identically
    at the conserved exponent.
    """
    ux = _deriv(u.grid, u.values, 1)
    uxx = _deriv(u.grid, u.values, 2)
    return -(p * dim.b - 1.0) * float(np.mean(ux * np.abs(uxx) ** p))


def _record(grid: PeriodicGrid, t: float, u: np.ndarray, dim: Dimension) -> DiagnosticsRecord:
    ut, ux = _rhs(grid, u, dim.a)
    uxx = _deriv(grid, u, 2)
    p = dim.conserved_p if dim.n >= 3 else np.inf
    return DiagnosticsRecord(
        t=float(t),
        mean_u=float(np.mean(u)),
        min_dxu=float(ux.min()),
        max_dxu=float(ux.max()),
        c1_norm_u=float(np.abs(u).max() + np.abs(ux).max()),
        uxx_norm=_lp(uxx, p),
        f_value=-dim.a * float(np.mean(ux * ux)),
        dt_u_sup=float(np.abs(ut).max()),
    )


def record(t: float, u: Field, dim: Dimension) -> DiagnosticsRecord:
    return _record(u.grid, t, u.values, dim)


def c1_bound(first: DiagnosticsRecord, dim: Dimension) -> float | None:
    """A-priori bound on ``||u(t)||_{C^1}`` built from the initial record.

    ``||u0||_{C^2}`` for ``n = 3`` and ``||u0||_{C^1} + ||u0''||_p`` for ``n > 3``;
    the two expressions coincide because ``uxx_norm`` is the sup norm at ``n = 3``.
    ``None`` when no bound is available (``n < 3``).
    """
    if dim.n < 3:
        return None
    return first.c1_norm_u + first.uxx_norm


def dt_u_bound(first: DiagnosticsRecord, dim: Dimension) -> float | None:
    """Bound on ``||u_t||_inf`` implied by the C^1 bound.

    With ``B`` the C^1 bound, ``|u u_x| <= B^2`` and the mean-free antiderivative
    of ``(u_x)^2 - mean`` is bounded by its L^1 norm, at most ``2 B^2``.
    """
    B = c1_bound(first, dim)
    if B is None:
        return None
    return (1.0 + 2.0 * dim.a) * B * B


@dataclass(frozen=True)
class DriftSummary:
    mean_drift_abs: float
    mean_drift_rel: float
    uxx_drift_abs: float
    uxx_drift_rel: float
    max_c1: float
    c1_bound: float | None
    c1_status: str
    max_dt_u_sup: float
    dt_u_bound: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def _rel(d: float, ref: float) -> float:
    # a reference at round-off level carries no scale; report the absolute drift
    return d / abs(ref) if abs(ref) > 1e-12 else d


def drift_report(series, dim: Dimension, slack: float = BOUND_SLACK) -> DriftSummary:
    """Summarise the drift of conserved quantities over a run."""
    series = list(series)
    if not series:
        raise ValueError("drift report needs at least one record")
    first = series[0]
    means = np.array([r.mean_u for r in series])
    norms = np.array([r.uxx_norm for r in series])
    c1 = np.array([r.c1_norm_u for r in series])
    mean_abs = float(np.max(np.abs(means - first.mean_u)))
    uxx_abs = float(np.max(np.abs(norms - first.uxx_norm)))
    bound = c1_bound(first, dim)
    if bound is None:
        status = f"not applicable (n={dim.n:g})"
    elif c1.max() <= bound + slack:
        status = "ok"
    else:
        status = "violated"
    return DriftSummary(
        mean_drift_abs=mean_abs,
        mean_drift_rel=_rel(mean_abs, first.mean_u),
        uxx_drift_abs=uxx_abs,
        uxx_drift_rel=_rel(uxx_abs, first.uxx_norm),
        max_c1=float(c1.max()),
        c1_bound=bound,
        c1_status=status,
        max_dt_u_sup=float(max(r.dt_u_sup for r in series)),
        dt_u_bound=dt_u_bound(first, dim),
    )


def write_csv(path, series) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in series:
            w.writerow(r.as_row())


def read_csv(path) -> list[DiagnosticsRecord]:
    names = [f.name for f in fields(DiagnosticsRecord)]
    with open(path, newline="") as fh:
        return [DiagnosticsRecord(**{k: float(row[k]) for k in names}) for row in csv.DictReader(fh)]
