"""Frequency grids with quadrature weights, and time slices on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FreqGrid:
    """Frequency points ``xi`` of shape ``(M, n)`` and quadrature weights ``(M,)``."""

    xi: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        if xi.ndim == 1:
            xi = xi[:, None]
        w = np.asarray(self.weights, dtype=float).ravel()
        if w.shape[0] != xi.shape[0]:
            raise ValueError("one weight per frequency point is required")
        if np.any(w < 0):
            raise ValueError("quadrature weights must be non-negative")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "weights", w)

    @property
    def n(self):
        return self.xi.shape[1]

    @property
    def size(self):
        return self.xi.shape[0]

    @property
    def abs_xi(self):
        return np.sqrt(np.sum(self.xi ** 2, axis=1))

    @property
    def sq_xi(self):
        return np.sum(self.xi ** 2, axis=1)

    @classmethod
    def points(cls, xi, weights=None):
        xi = np.asarray(xi, dtype=float)
        m = xi.shape[0] if xi.ndim else 1
        return cls(np.atleast_1d(xi), np.ones(m) if weights is None else weights)

    @classmethod
    def line(cls, xi_max, m):
        """``xi = j * dxi`` for ``|j| <= m`` with trapezoidal weights."""
        if m < 1:
            raise ValueError("line grid needs m >= 1")
        dxi = xi_max / m
        j = np.arange(-m, m + 1)
        w = np.full(j.size, dxi)
        w[0] = w[-1] = 0.5 * dxi
        return cls(j * dxi, w)

    @classmethod
    def polar(cls, r_max, nr, ntheta):
        """Polar grid in the plane; trapezoid in ``r``, periodic in angle."""
        if nr < 1 or ntheta < 1:
            raise ValueError("polar grid needs nr, ntheta >= 1")
        dr = r_max / nr
        r = dr * np.arange(1, nr + 1)
        wr = r * dr
        wr[-1] *= 0.5
        th = 2 * np.pi * np.arange(ntheta) / ntheta
        R, TH = np.meshgrid(r, th, indexing="ij")
        xi = np.column_stack([(R * np.cos(TH)).ravel(), (R * np.sin(TH)).ravel()])
        w = np.repeat(wr * (2 * np.pi / ntheta), ntheta)
        # the origin carries the area of the inner half-ring
        xi = np.vstack([[0.0, 0.0], xi])
        w = np.concatenate([[np.pi * (dr / 2) ** 2], w])
        return cls(xi, w)


@dataclass(frozen=True)
class Snapshot:
    """A time slice ``u(t, .)`` stored as complex log-amplitudes on a grid.

    The mode values are ``exp(log_scale + log_amp)``: ``log_amp`` is
    ``log|u_hat| + i arg(u_hat)`` relative to a common real ``log_scale``,
    so data far below double range keep their full relative precision.  A
    zero mode has real part ``-inf``.
    """

    grid: FreqGrid
    log_amp: np.ndarray
    log_scale: float = 0.0

    def __post_init__(self):
        la = np.asarray(self.log_amp, dtype=complex).ravel()
        if la.size != self.grid.size:
            raise ValueError("snapshot length does not match grid")
        if np.any(np.isnan(la.real)) or np.any(la.real == np.inf):
            raise ValueError("snapshot values must be finite")
        if not np.isfinite(self.log_scale):
            raise ValueError("log_scale must be finite")
        object.__setattr__(self, "log_amp", la)
        object.__setattr__(self, "log_scale", float(self.log_scale))

    @classmethod
    def from_values(cls, grid, values):
        v = np.asarray(values, dtype=complex).ravel()
        with np.errstate(divide="ignore"):
            la = np.log(np.abs(v)) + 1j * np.angle(v)
        return cls(grid, la)

    @property
    def log_abs2(self):
        """``log|u_hat|^2`` relative to ``2 log_scale``."""
        return 2.0 * self.log_amp.real

    @property
    def values(self):
        return np.exp(self.log_scale + self.log_amp)


def log_amp_of(values):
    v = np.asarray(values, dtype=complex)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(v)) + 1j * np.angle(v)
