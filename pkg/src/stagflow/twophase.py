r"""Piecewise-affine two-phase weak solutions.

The velocity is the periodic extension of

.. math::

    u(x,t) = \alpha + \begin{cases}
        x p, & 0 < x < \phi,\\
        \phi p + (x-\phi) q, & \phi < x < \psi,\\
        \phi p + (\psi-\phi) q + (x-\psi) p, & \psi < x < 1,
    \end{cases}

whose slopes obey ``p' = (p^2 + n p q)/(n-1)``, ``q' = (q^2 + n p q)/(n-1)``
and whose interfaces move with the fluid. The spatial mean is fixed to zero,
which determines ``alpha`` algebraically from ``p``, ``phi`` and ``psi``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import PhaseCollapse
from .operators import Dimension

COLLAPSE_TOL = 1e-12
CSV_COLUMNS = ("t", "p", "q", "phi", "psi", "alpha", "int_p", "int_q", "N_residual", "partition_residual")


def alpha_of(p: float, phi: float, psi: float, c: float = 0.0) -> float:
    """Offset velocity that gives the profile spatial mean ``c``."""
    return c - 0.5 * p * (phi + psi - 1.0)


@dataclass(frozen=True)
class TwoPhaseState:
    t: float
    p: float
    q: float
    phi: float
    psi: float
    int_p: float
    int_q: float
    dim: Dimension
    c: float = 0.0

    def __post_init__(self):
        if self.c != 0.0:
            raise ValueError("only zero-mean two-phase solutions (c = 0) are supported")
        if not self.phi < self.psi:
            raise ValueError(f"phase boundaries must satisfy phi < psi, got {self.phi}, {self.psi}")

    @classmethod
    def initial(cls, p: float, q: float, phi: float, psi: float, dim: Dimension) -> "TwoPhaseState":
        """Build the t=0 state and check the periodicity constraint ``N = 0``."""
        if not 0.0 < phi < psi < 1.0:
            raise ValueError("initial interfaces must satisfy 0 < phi < psi < 1")
        if not (p > 0 > q or p < 0 < q):
            raise ValueError("initial slopes must have opposite signs")
        s = cls(0.0, p, q, phi, psi, 0.0, 0.0, dim)
        if abs(s.N) > 1e-12 * max(1.0, abs(p), abs(q)):
            raise ValueError(f"data are not periodic: N = {s.N:.3e}")
        return s

    @classmethod
    def from_slopes(cls, p: float, q: float, phi: float, dim: Dimension) -> "TwoPhaseState":
        """Periodic data with left interface ``phi``; ``psi`` follows from ``N = 0``."""
        psi = phi + p / (p - q)
        return cls.initial(p, q, phi, psi, dim)

    @property
    def alpha(self) -> float:
        return alpha_of(self.p, self.phi, self.psi, self.c)

    @property
    def N(self) -> float:
        """Periodicity defect ``phi p + (psi - phi) q + (1 - psi) p``."""
        return self.phi * self.p + (self.psi - self.phi) * self.q + (1.0 - self.psi) * self.p

    @property
    def center(self) -> float:
        return self.psi - self.phi

    @property
    def outer(self) -> float:
        return self.phi + 1.0 - self.psi

    @property
    def f(self) -> float:
        """Spatially uniform forcing ``-(n/(n-1)) int (u_x)^2``."""
        n = self.dim.n
        return -n / (n - 1) * (self.outer * self.p**2 + self.center * self.q**2)


def _rates(p, q, phi, psi, n):
    alpha = -0.5 * p * (phi + psi - 1.0)
    m = n - 1.0
    return (
        (p * p + n * p * q) / m,
        (q * q + n * p * q) / m,
        alpha + phi * p,
        alpha + phi * p + (psi - phi) * q,
    )


def twophase_rhs(s: TwoPhaseState) -> tuple[float, float, float, float]:
    """``(p', q', phi', psi')`` with ``alpha`` recomputed from the zero-mean condition."""
    if s.center < COLLAPSE_TOL or s.outer < COLLAPSE_TOL:
        raise PhaseCollapse(s.t, s.center, s.outer)
    return _rates(s.p, s.q, s.phi, s.psi, s.dim.n)


def evolve_twophase(s0: TwoPhaseState, dt: float, T_end: float, record_every: int = 1) -> list[TwoPhaseState]:
    """RK4 integration of the slopes, interfaces and the running integrals of p and q."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    n = s0.dim.n
    nsteps = int(round(T_end / dt))
    if abs(nsteps * dt - T_end) > 1e-9 * max(1.0, T_end):
        raise ValueError("T_end must be an integer multiple of dt")
    p, q, phi, psi, ip, iq = s0.p, s0.q, s0.phi, s0.psi, s0.int_p, s0.int_q
    t0 = s0.t
    h = dt
    h2 = 0.5 * dt
    out = [s0]

    for i in range(1, nsteps + 1):
        a1, b1, c1, d1 = _rates(p, q, phi, psi, n)
        a2, b2, c2, d2 = _rates(p + h2 * a1, q + h2 * b1, phi + h2 * c1, psi + h2 * d1, n)
        a3, b3, c3, d3 = _rates(p + h2 * a2, q + h2 * b2, phi + h2 * c2, psi + h2 * d2, n)
        a4, b4, c4, d4 = _rates(p + h * a3, q + h * b3, phi + h * c3, psi + h * d3, n)
        w = h / 6.0
        # the running integrals reuse the stage values of p and q
        ip += w * (p + 2 * (p + h2 * a1) + 2 * (p + h2 * a2) + (p + h * a3))
        iq += w * (q + 2 * (q + h2 * b1) + 2 * (q + h2 * b2) + (q + h * b3))
        p += w * (a1 + 2 * a2 + 2 * a3 + a4)
        q += w * (b1 + 2 * b2 + 2 * b3 + b4)
        phi += w * (c1 + 2 * c2 + 2 * c3 + c4)
        psi += w * (d1 + 2 * d2 + 2 * d3 + d4)
        center, outer = psi - phi, phi + 1.0 - psi
        if not (center >= COLLAPSE_TOL and outer >= COLLAPSE_TOL) or not math.isfinite(p + q):
            raise PhaseCollapse(t0 + i * dt, center, outer)
        if i % record_every == 0 or i == nsteps:
            out.append(TwoPhaseState(t0 + i * dt, p, q, phi, psi, ip, iq, s0.dim))
    return out


def sample_profile(s: TwoPhaseState, x) -> np.ndarray | float:
    """Velocity of the three-piece affine profile at positions ``x`` (periodic)."""
    xa = np.mod(np.asarray(x, dtype=float), 1.0)
    left = xa * s.p
    mid = s.phi * s.p + (xa - s.phi) * s.q
    right = s.phi * s.p + s.center * s.q + (xa - s.psi) * s.p
    u = s.alpha + np.where(xa < s.phi, left, np.where(xa < s.psi, mid, right))
    return float(u) if np.ndim(u) == 0 else u


def slope_at(s: TwoPhaseState, x) -> np.ndarray:
    """``u_x``: ``p`` in the outer phase, ``q`` in the centre phase."""
    xa = np.mod(np.asarray(x, dtype=float), 1.0)
    return np.where((xa > s.phi) & (xa < s.psi), s.q, s.p)


def indiv_phases(s0: TwoPhaseState, int_p: float) -> tuple[float, float]:
    """Closed-form interfaces in terms of ``int_0^t p ds``."""
    grow = 0.5 * s0.outer * (math.exp(int_p) - 1.0)
    return s0.phi + grow, s0.psi - grow


def limit_phase(s0: TwoPhaseState) -> float:
    """Common long-time limit of both interfaces, ``(phi0 + psi0)/2``."""
    return 0.5 * (s0.phi + s0.psi)


def limit_int_p(s0: TwoPhaseState) -> float:
    """``int_0^inf p dt = -log(outer phase fraction at t=0)`` for ``p0 > 0 > q0``."""
    return -math.log(s0.outer)


def p_minus_q(s0: TwoPhaseState, s: TwoPhaseState) -> float:
    """Closed form ``(p0 - q0) exp(int (p + q) / (n - 1))``."""
    return (s0.p - s0.q) * math.exp((s.int_p + s.int_q) / (s0.dim.n - 1.0))


def partition_residual(s0: TwoPhaseState, s: TwoPhaseState) -> float:
    return s0.outer * math.exp(s.int_p) + s0.center * math.exp(s.int_q) - 1.0


# -- polar form -------------------------------------------------------------------


def _r_shape(theta: float, n: float) -> float:
    c, s = math.cos(theta), math.sin(theta)
    return abs(c * s) ** (1.0 / (n - 1)) * abs(c - s) ** (-(n + 1) / (n - 1))


def polar_constant(s0: TwoPhaseState) -> float:
    """Trajectory constant ``C`` in ``r = C |cos sin|^{1/(n-1)} |cos - sin|^{-(n+1)/(n-1)}``."""
    theta0 = math.atan2(s0.q, s0.p)
    return math.hypot(s0.p, s0.q) / _r_shape(theta0, s0.dim.n)


def polar_r(theta: float, C: float, n: float) -> float:
    return C * _r_shape(theta, n)


def polar_oracle(s0: TwoPhaseState, t, rtol: float = 1e-12, atol: float = 1e-14):
    """Polar coordinates ``(r, theta)`` of ``(p, q)`` at time(s) ``t``.

    Only the angle is integrated (adaptive DOP853); the radius then follows
    from the first integral of the slope system. Requires ``p0 > 0 > q0``.
    """
    if not s0.p > 0 > s0.q:
        raise ValueError("polar oracle needs p0 > 0 > q0")
    n = s0.dim.n
    C = polar_constant(s0)
    theta0 = math.atan2(s0.q, s0.p)
    ts = np.atleast_1d(np.asarray(t, dtype=float)) - s0.t
    if np.any(ts < 0):
        raise ValueError("polar oracle integrates forward in time only")

    def rate(_, y):
        c, s = math.cos(y[0]), math.sin(y[0])
        return [-C * abs(c * s) ** (n / (n - 1)) * abs(c - s) ** (-2.0 / (n - 1))]

    tmax = float(ts.max())
    if tmax == 0.0:
        theta = np.full(ts.shape, theta0)
    else:
        sol = solve_ivp(rate, (0.0, tmax), [theta0], method="DOP853", t_eval=np.sort(ts),
                        rtol=rtol, atol=atol, dense_output=True)
        if not sol.success:
            raise RuntimeError(f"polar integration failed: {sol.message}")
        theta = sol.sol(ts)[0]
        theta[ts == 0.0] = theta0
    r = np.array([polar_r(th, C, n) for th in theta])
    if np.ndim(t) == 0:
        return float(r[0]), float(theta[0])
    return r, theta


# -- interface check --------------------------------------------------------------


def _fd4(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order finite-difference derivative on a uniform series."""
    v = np.asarray(values, dtype=float)
    d = np.empty_like(v)
    d[2:-2] = (v[:-4] - 8 * v[1:-3] + 8 * v[3:-1] - v[4:]) / (12 * h)
    d[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
    d[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h)
    d[-1] = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4] + 3 * v[-5]) / (12 * h)
    d[-2] = (3 * v[-1] + 10 * v[-2] - 18 * v[-3] + 6 * v[-4] - v[-5]) / (12 * h)
    return d


def rh_check(series) -> float:
    """Largest mismatch between interface speeds and the fluid velocity there.

    Interface speeds are differentiated from the recorded trajectory (uniform
    spacing, at least five states) and compared with the left limits
    ``u(phi^-)`` and ``u(psi^-)`` of the profile.
    """
    series = list(series)
    if len(series) < 5:
        raise ValueError("rh_check needs at least five equally spaced states")
    ts = np.array([s.t for s in series])
    h = ts[1] - ts[0]
    if np.ptp(np.diff(ts)) > 1e-9 * h:
        raise ValueError("states must be equally spaced in time")
    phi_dot = _fd4([s.phi for s in series], h)
    psi_dot = _fd4([s.psi for s in series], h)
    u_phi = np.array([s.alpha + s.phi * s.p for s in series])
    u_psi = np.array([s.alpha + s.phi * s.p + s.center * s.q for s in series])
    return float(max(np.abs(phi_dot - u_phi).max(), np.abs(psi_dot - u_psi).max()))


def to_rows(series, s0: TwoPhaseState | None = None):
    series = list(series)
    s0 = s0 or series[0]
    for s in series:
        yield [s.t, s.p, s.q, s.phi, s.psi, s.alpha, s.int_p, s.int_q, s.N, partition_residual(s0, s)]


def write_csv(path, series) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in to_rows(series):
            w.writerow([repr(float(v)) for v in row])

