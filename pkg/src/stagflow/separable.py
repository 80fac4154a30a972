"""Separable solutions ``u = X(x) T(t)`` and why they cannot blow up for n > 3.

The time factor solves the Riccati equation ``T' = lam T^2``. Multiplying the
profile equation by ``|X''|^{r-2} X''`` with ``r = (n-1)/(n-3)`` turns every term
except ``lam |X''|^r`` into an exact derivative, so on the torus
``lam * int |X''|^r = 0`` for any periodic profile.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionUnsupported
from .operators import Dimension, Field, _deriv


@dataclass(frozen=True)
class BlowUpAt:
    """Returned by :func:`riccati_T` when ``t`` is at or past the singular time."""

    t_star: float


@dataclass(frozen=True)
class SeparableConfig:
    lam: float
    T0: float
    X: Field
    dim: Dimension


def riccati_T(lam: float, T0: float, t: float) -> float | BlowUpAt:
    """Closed-form ``T(t) = T0 / (1 - lam T0 t)``."""
    k = lam * T0
    if k > 0 and t >= 1.0 / k:
        return BlowUpAt(1.0 / k)
    return T0 / (1.0 - k * t)


def _exponent(dim: Dimension) -> float:
    if dim.n <= 3:
        raise DimensionUnsupported(f"exact-derivative identity needs n > 3, got n={dim.n}")
    return (dim.n - 1) / (dim.n - 3)


def exact_derivative_identity(X: Field, dim: Dimension) -> float:
    """``int [X' |X''|^r + X (|X''|^r)'] dx`` with ``r = (n-1)/(n-3)``.

    The integrand is ``(X |X''|^r)'``; all derivatives are spectral and the
    integral is the periodic trapezoid rule, so the discrete value vanishes up
    to round-off for every profile, smooth or not.
    """
    r = _exponent(dim)
    grid = X.grid
    x1 = _deriv(grid, X.values, 1)
    g = np.abs(_deriv(grid, X.values, 2)) ** r
    return float(np.mean(x1 * g + X.values * _deriv(grid, g, 1)))


def separable_residual(cfg: SeparableConfig) -> Field:
    """Pointwise residual ``lam X'' + b X' X'' + X X'''`` of the profile equation."""
    X = cfg.X
    grid = X.grid
    x1 = _deriv(grid, X.values, 1)
    x2 = _deriv(grid, X.values, 2)
    x3 = _deriv(grid, X.values, 3)
    return X.with_values(cfg.lam * x2 + cfg.dim.b * x1 * x2 + X.values * x3)


def implied_lambda(cfg: SeparableConfig) -> tuple[float, float]:
    """Separation constant forced by a profile, and an a-priori bound on it.

    Weighting the residual ``R`` with ``w = |X''|^{r-2} X''`` and integrating gives
    ``lam_eff * int |X''|^r = int R w``. Returns ``(lam_eff, bound)`` where
    ``bound = ||R||_inf ||w||_1 / int |X''|^r``; a certified profile (small
    residual) therefore pins ``lam`` to within ``bound`` of zero.
    """
    r = _exponent(cfg.dim)
    grid = cfg.X.grid
    x2 = _deriv(grid, cfg.X.values, 2)
    mass = float(np.mean(np.abs(x2) ** r))
    if mass == 0.0:
        raise ValueError("profile has X'' = 0; the constraint is empty")
    w = np.abs(x2) ** (r - 1) * np.sign(x2)
    R = separable_residual(cfg).values
    lam_eff = float(np.mean(R * w)) / mass
    bound = float(np.abs(R).max() * np.mean(np.abs(w))) / mass
    return lam_eff, bound
