r"""Periodic grid, Fourier collocation operators and the nonlocal right-hand side.

The evolution equation solved throughout the package is

.. math::

    \partial_t u + u\,\partial_x u = a\,\partial_x^{-2}\partial_x\big((\partial_x u)^2\big),
    \qquad a = \frac{n}{n-1},

on the unit torus. All operators work on uniformly sampled periodic data and
act in Fourier space, so they are exact for resolved trigonometric polynomials.

Functions prefixed with an underscore operate on raw ``numpy`` arrays and are
what the time steppers call in their inner loops; the public functions wrap
them for :class:`Field` objects.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NonZeroMean

TOL_MEAN = 1e-10


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid ``x_j = j/M`` on the unit torus."""

    M: int

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 8 or self.M % 2:
            raise ValueError(f"grid size must be an even integer >= 8, got {self.M!r}")

    @cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.M) / self.M

    @property
    def dx(self) -> float:
        return 1.0 / self.M

    @cached_property
    def k(self) -> np.ndarray:
        """Non-negative wavenumbers of the real FFT."""
        return np.fft.rfftfreq(self.M, 1.0 / self.M)

    @cached_property
    def ik(self) -> np.ndarray:
        """First-derivative symbol ``2*pi*i*k`` with the Nyquist mode removed."""
        s = 2j * np.pi * self.k
        s[-1] = 0.0
        return s

    @cached_property
    def inv_ik(self) -> np.ndarray:
        """Symbol of the mean-free antiderivative: ``1/(2*pi*i*k)``, zero at k=0 and Nyquist."""
        s = np.zeros_like(self.ik)
        s[1:-1] = 1.0 / self.ik[1:-1]
        return s

    @cached_property
    def dealias(self) -> np.ndarray:
        """2/3-rule mask: keeps modes with ``3|k| < M``."""
        return (3 * self.k < self.M).astype(float)

    def symbol(self, order: int) -> np.ndarray:
        s = (2j * np.pi * self.k) ** order
        if order % 2:
            s[-1] = 0.0
        return s

    def sample(self, func) -> "Field":
        """Build a field by evaluating ``func`` on the nodes."""
        return Field(self, np.asarray(func(self.x), dtype=float))


@dataclass(frozen=True)
class Field:
    """Real periodic samples on a :class:`PeriodicGrid`."""

    grid: PeriodicGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.M,):
            raise ValueError(f"expected {self.grid.M} values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values) -> "Field":
        return Field(self.grid, values)

    def __add__(self, other):
        if isinstance(other, Field):
            other = other.values
        return self.with_values(self.values + other)

    def __sub__(self, other):
        if isinstance(other, Field):
            other = other.values
        return self.with_values(self.values - other)

    def __mul__(self, other):
        if isinstance(other, Field):
            other = other.values
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class Dimension:
    """Spatial dimension parameter ``n > 1`` and the coefficients derived from it."""

    n: float

    def __post_init__(self):
        if not np.isfinite(self.n) or self.n <= 1:
            raise ValueError(f"dimension parameter must satisfy n > 1, got {self.n!r}")

    @property
    def a(self) -> float:
        """Nonlocal coefficient ``n/(n-1)``."""
        return self.n / (self.n - 1)

    @property
    def b(self) -> float:
        """Stretching exponent ``(n-3)/(n-1)``."""
        return (self.n - 3) / (self.n - 1)

    @property
    def lam(self) -> float:
        """Riccati coefficient ``1/(n-1)`` in the gradient equation."""
        return 1.0 / (self.n - 1)

    @property
    def conserved_p(self) -> float:
        """Exponent of the conserved Lebesgue norm of u_xx (``inf`` at n=3)."""
        if self.n < 3:
            raise ValueError("no conserved norm of u_xx for n < 3")
        if self.n == 3:
            return np.inf
        return (self.n - 1) / (self.n - 3)

    @property
    def is_integer(self) -> bool:
        return float(self.n).is_integer()


# -- array-level kernels ---------------------------------------------------


def _deriv(grid: PeriodicGrid, v: np.ndarray, order: int = 1) -> np.ndarray:
    return np.fft.irfft(grid.symbol(order) * np.fft.rfft(v), grid.M)


def _nonlocal(grid: PeriodicGrid, v: np.ndarray) -> np.ndarray:
    return np.fft.irfft(grid.inv_ik * np.fft.rfft(v), grid.M)


def _rhs(grid: PeriodicGrid, u: np.ndarray, a: float) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(du/dt, du/dx)`` with both quadratic products dealiased."""
    uh = np.fft.rfft(u)
    ux = np.fft.irfft(grid.ik * uh, grid.M)
    mask = grid.dealias
    sq = np.fft.rfft(ux * ux) * mask
    adv = np.fft.rfft(u * ux) * mask
    return np.fft.irfft(a * grid.inv_ik * sq - adv, grid.M), ux


def _phases(points: np.ndarray, K: int) -> np.ndarray:
    """``exp(2*pi*i*k*x)`` for ``k < K``: exact exponentials every 16 modes,
    products in between (much cheaper than a full table of exponentials)."""
    B = 16
    nb = -(-K // B)
    base = np.exp(2j * np.pi * np.outer(points, np.arange(nb) * B))
    step = np.empty((points.size, B), dtype=complex)
    step[:, 0] = 1.0
    step[:, 1:] = np.exp(2j * np.pi * points)[:, None]
    np.cumprod(step, axis=1, out=step)
    return (base[:, :, None] * step[:, None, :]).reshape(points.size, nb * B)[:, :K]


def fourier_eval(values: np.ndarray, points) -> np.ndarray:
    """Evaluate the trigonometric interpolant of periodic samples at arbitrary points.

    ``values`` may be 1-D (one field) or 2-D with fields along the last axis;
    ``points`` are positions on the real line (reduced mod 1 implicitly).
    """
    values = np.asarray(values, dtype=float)
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    M = values.shape[-1]
    K = M // 2 + 1
    c = np.fft.rfft(values, axis=-1) / M
    c[..., 1:-1] *= 2.0
    flat = np.mod(pts.ravel(), 1.0)
    res = np.empty(values.shape[:-1] + flat.shape)
    chunk = max(1, 1_000_000 // K)
    for s in range(0, flat.size, chunk):
        E = _phases(flat[s:s + chunk], K)
        res[..., s:s + chunk] = (c @ E.T).real
    return res.reshape(values.shape[:-1] + pts.shape)


# -- public operations ----------------------------------------------------------


def mean(f: Field) -> float:
    """Average over the torus (trapezoid rule on the periodic grid)."""
    return float(np.mean(f.values))


def deriv(f: Field, order: int = 1) -> Field:
    """Fourier-collocation derivative of order 1, 2 or 3."""
    if order not in (1, 2, 3):
        raise ValueError(f"derivative order must be 1, 2 or 3, got {order!r}")
    return f.with_values(_deriv(f.grid, f.values, order))


def inv_dx(f: Field, tol_mean: float = TOL_MEAN) -> Field:
    """Mean-zero periodic antiderivative; requires a mean-zero input."""
    m = mean(f)
    if abs(m) > tol_mean:
        raise NonZeroMean(m, tol_mean)
    return f.with_values(_nonlocal(f.grid, f.values))


def nonlocal_op(f: Field) -> Field:
    """The operator ``dx^{-2} dx``: antiderivative of ``f - mean(f)``."""
    return f.with_values(_nonlocal(f.grid, f.values))


def forcing_f(u: Field, dim: Dimension) -> float:
    """Spatially uniform forcing ``-a * mean((u_x)^2)``."""
    ux = _deriv(u.grid, u.values, 1)
    return -dim.a * float(np.mean(ux * ux))


def rhs_eq3(u: Field, dim: Dimension) -> Field:
    """Time derivative ``a * nonlocal((u_x)^2) - u u_x``."""
    return u.with_values(_rhs(u.grid, u.values, dim.a)[0])
