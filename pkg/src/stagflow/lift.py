r"""Lift a one-dimensional solution to an n-dimensional Euler flow and check it.

The velocity is ``(u(x), -u_x(x) x'/(n-1))`` and the pressure
``P(x) + f |x'|^2 / (2(n-1))`` with ``P_x = -(u_t + u u_x)``. Residuals of the
full momentum and continuity equations are evaluated at sample points
``(x, x')`` with ``x'`` in the transverse space ``R^{n-1}``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionUnsupported, NonZeroMean
from .operators import Dimension, Field, _deriv, _nonlocal, fourier_eval, forcing_f
from .twophase import TwoPhaseState, twophase_rhs

COMPAT_TOL = 1e-8


def _integer_n(dim: Dimension) -> int:
    if not dim.is_integer or dim.n < 2:
        raise DimensionUnsupported(f"lifting needs an integer dimension n >= 2, got n={dim.n}")
    return int(dim.n)


def _split(points, n):
    xs = np.array([float(p[0]) for p in points])
    xp = np.array([np.atleast_1d(np.asarray(p[1], dtype=float)) for p in points]).reshape(len(xs), -1)
    if xp.shape[1] != n - 1:
        raise ValueError(f"transverse coordinates must have length {n - 1}")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(xp))):
        raise ValueError("sample points must be finite")
    return xs, xp


@dataclass(frozen=True)
class PressureModel:
    P: Field
    f: float
    dim: Dimension

    def __call__(self, x, xprime) -> np.ndarray:
        xprime = np.atleast_2d(np.asarray(xprime, dtype=float))
        r2 = np.sum(xprime**2, axis=-1)
        return fourier_eval(self.P.values, x) + self.f * r2 / (2.0 * (self.dim.n - 1))

    def laplacian(self) -> Field:
        """``P_xx + f``, the Laplacian of the full pressure (independent of ``x'``)."""
        return self.P.with_values(_deriv(self.P.grid, self.P.values, 2) + self.f)


@dataclass(frozen=True)
class LiftedSample:
    x: float
    xprime: np.ndarray
    velocity: np.ndarray
    pressure: float


def pressure_model(u: Field, ut: Field, dim: Dimension, tol: float = COMPAT_TOL) -> PressureModel:
    """Pressure consistent with the pair ``(u, u_t)``.

    ``P`` is the mean-zero antiderivative of ``-(u_t + u u_x)``; that integrand
    must have zero mean for the pressure to be periodic.
    """
    ux = _deriv(u.grid, u.values, 1)
    g = -(ut.values + u.values * ux)
    m = float(np.mean(g))
    if abs(m) > tol:
        raise NonZeroMean(m, tol)
    return PressureModel(u.with_values(_nonlocal(u.grid, g)), forcing_f(u, dim), dim)


def lift_velocity(u: Field, points, dim: Dimension, pressure: PressureModel | None = None) -> list[LiftedSample]:
    """Sample the n-dimensional velocity (and pressure, if a model is given)."""
    n = _integer_n(dim)
    xs, xp = _split(points, n)
    uu, ux = fourier_eval(np.vstack((u.values, _deriv(u.grid, u.values, 1))), xs)
    pr = pressure(xs, xp) if pressure is not None else np.full(xs.shape, np.nan)
    out = []
    for i in range(len(xs)):
        vel = np.concatenate(([uu[i]], -ux[i] * xp[i] / (n - 1)))
        out.append(LiftedSample(float(xs[i]), xp[i].copy(), vel, float(pr[i])))
    return out


@dataclass
class Kinematics:
    """One-dimensional quantities at sample abscissae, plus the forcing ``f``."""

    u: np.ndarray
    ux: np.ndarray
    uxx: np.ndarray
    ut: np.ndarray
    utx: np.ndarray
    Px: np.ndarray
    f: float


def field_kinematics(u: Field, ut: Field, dim: Dimension, xs) -> Kinematics:
    """Spectral interpolation of ``u``, ``u_t`` and their derivatives at ``xs``."""
    pm = pressure_model(u, ut, dim)
    g = u.grid
    stack = np.vstack((
        u.values,
        _deriv(g, u.values, 1),
        _deriv(g, u.values, 2),
        ut.values,
        _deriv(g, ut.values, 1),
        _deriv(g, pm.P.values, 1),
    ))
    vals = fourier_eval(stack, xs)
    return Kinematics(*vals, f=pm.f)


def _piece_integral(fun, a, b, order=4):
    if b <= a:
        return 0.0
    z, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (b - a) * z + 0.5 * (a + b)
    return 0.5 * (b - a) * float(np.dot(w, fun(x)))


def twophase_kinematics(s: TwoPhaseState, xs, tol: float = COMPAT_TOL) -> Kinematics:
    """Exact kinematics of a two-phase state; time derivatives from the slope system.

    Points must lie strictly inside a phase. The compatibility integral
    ``int (u_t + u u_x)`` is evaluated piecewise by Gauss quadrature.
    """
    pd, qd, phid, psid = twophase_rhs(s)
    p, q, phi, psi = s.p, s.q, s.phi, s.psi
    alpha = s.alpha
    alphad = -0.5 * pd * (phi + psi - 1.0) - 0.5 * p * (phid + psid)

    def pieces(x):
        x = np.mod(np.asarray(x, dtype=float), 1.0)
        left, mid = x < phi, (x >= phi) & (x < psi)
        u = np.where(left, alpha + x * p,
                     np.where(mid, alpha + phi * p + (x - phi) * q,
                              alpha + phi * p + (psi - phi) * q + (x - psi) * p))
        ux = np.where(mid, q, p)
        ut = np.where(
            left, alphad + x * pd,
            np.where(mid,
                     alphad + phid * p + phi * pd + (x - phi) * qd - phid * q,
                     alphad + phid * p + phi * pd + (psid - phid) * q + (psi - phi) * qd
                     + (x - psi) * pd - psid * p))
        utx = np.where(mid, qd, pd)
        return u, ux, ut, utx

    def integrand(x):
        u, ux, ut, _ = pieces(x)
        return ut + u * ux

    compat = sum(_piece_integral(integrand, a, b) for a, b in ((0.0, phi), (phi, psi), (psi, 1.0)))
    if abs(compat) > tol:
        raise NonZeroMean(compat, tol)
    u, ux, ut, utx = pieces(xs)
    return Kinematics(u, ux, np.zeros_like(u), ut, utx, -(ut + u * ux), s.f)


def momentum_residual(kin: Kinematics, xprime: np.ndarray, n: int) -> np.ndarray:
    """Components of ``u_t + (u . grad) u + grad p`` at each point, shape ``(m, n)``."""
    xp = np.asarray(xprime, dtype=float).reshape(len(kin.u), n - 1)
    m = n - 1
    res = np.empty((len(kin.u), n))
    res[:, 0] = kin.ut + kin.u * kin.ux + kin.Px
    for k in range(m):
        vk = -kin.ux * xp[:, k] / m
        dt_vk = -kin.utx * xp[:, k] / m
        dx_vk = -kin.uxx * xp[:, k] / m
        # sum over j of v_j d_j v_k; only j = k contributes
        transverse = vk * (-kin.ux / m)
        dk_p = kin.f * xp[:, k] / m
        res[:, k + 1] = dt_vk + kin.u * dx_vk + transverse + dk_p
    return res


def divergence(u: Field, points, dim: Dimension, h: float = 1e-3) -> np.ndarray:
    """``div`` of the lifted velocity; transverse parts by central differences (exact, linear)."""
    n = _integer_n(dim)
    xs, xp = _split(points, n)
    ux = fourier_eval(_deriv(u.grid, u.values, 1), xs)
    total = ux.copy()
    for k in range(n - 1):
        e = np.zeros(n - 1)
        e[k] = h
        plus = lift_velocity(u, list(zip(xs, xp + e)), dim)
        minus = lift_velocity(u, list(zip(xs, xp - e)), dim)
        total += np.array([(a.velocity[k + 1] - b.velocity[k + 1]) / (2 * h) for a, b in zip(plus, minus)])
    return total


def euler_residual(u: Field, ut: Field, dim: Dimension, points) -> float:
    """Largest Euclidean norm of the momentum residual over the sample points."""
    n = _integer_n(dim)
    xs, xp = _split(points, n)
    res = momentum_residual(field_kinematics(u, ut, dim, xs), xp, n)
    return float(np.linalg.norm(res, axis=1).max())


def twophase_residual(s: TwoPhaseState, points) -> float:
    n = _integer_n(s.dim)
    xs, xp = _split(points, n)
    res = momentum_residual(twophase_kinematics(s, xs), xp, n)
    return float(np.linalg.norm(res, axis=1).max())


def sample_points(n: int, count: int, rng: np.random.Generator, radius: float = 1.0, avoid=(), margin=0.0):
    """Random ``(x, x')`` with ``|x'| <= radius``; ``x`` kept ``margin`` away from ``avoid``."""
    pts = []
    while len(pts) < count:
        x = rng.random()
        if any(min(abs(x - a) % 1.0, 1.0 - abs(x - a) % 1.0) <= margin for a in avoid):
            continue
        d = rng.standard_normal(n - 1)
        d /= np.linalg.norm(d) or 1.0
        r = radius * rng.random() ** (1.0 / (n - 1))
        pts.append((x, d * r))
    return pts


@dataclass
class ResidualReport:
    schema: int = 1
    n: int = 3
    points: list = field(default_factory=list)
    max_residual: float = 0.0
    mean_residual: float = 0.0
    max_divergence: float = 0.0

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)


def residual_report(u: Field, ut: Field, dim: Dimension, points) -> ResidualReport:
    """Per-point residual components plus max/mean summary, ready for JSON."""
    n = _integer_n(dim)
    xs, xp = _split(points, n)
    res = momentum_residual(field_kinematics(u, ut, dim, xs), xp, n)
    div = divergence(u, points, dim)
    norms = np.linalg.norm(res, axis=1)
    rows = [
        {"x": float(xs[i]), "xprime": xp[i].tolist(), "momentum": res[i].tolist(), "divergence": float(div[i])}
        for i in range(len(xs))
    ]
    return ResidualReport(
        n=n, points=rows, max_residual=float(norms.max()), mean_residual=float(norms.mean()),
        max_divergence=float(np.abs(div).max()),
    )
