"""Sobolev, Gevrey-Sobolev and Osgood-Sobolev norms of snapshots on a frequency grid.

Each norm ``||u||`` comes with a ``log_sq_*`` companion returning
``log ||u||^2``, which is what the estimate checks consume; the plain
accessors return the square root and may underflow to zero for data
stored far below double range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .grid import FreqGrid, Snapshot

__all__ = [
    "sobolev_norm", "gevrey_norm", "osgood_norm",
    "log_sq_sobolev", "log_sq_gevrey", "log_sq_osgood",
    "osgood_exponent", "gevrey_exponent", "embedding_constant", "EmbeddingConstant",
]


def osgood_exponent(m, sq_xi):
    """``|xi|^2 w(1/(|xi|^2 + 1))``."""
    sq_xi = np.asarray(sq_xi, dtype=float)
    return sq_xi * m(1.0 / (sq_xi + 1.0))


def gevrey_exponent(nu, eps, abs_xi):
    """``2 nu |xi|^{1/eps}``."""
    return 2.0 * nu * np.asarray(abs_xi, dtype=float) ** (1.0 / eps)


def _log_sq(s: Snapshot, d, extra, relative):
    g = s.grid
    with np.errstate(divide="ignore"):
        terms = np.log(g.weights) + d * np.log1p(g.sq_xi) + extra + s.log_abs2
    if np.all(np.isneginf(terms)):
        return -math.inf
    out = float(logsumexp(terms))
    return out if relative else out + 2.0 * s.log_scale


def log_sq_sobolev(s, d, relative=False):
    """``log ||u||^2_{H^d}``; with ``relative`` the ``2 log_scale`` term is left out."""
    return _log_sq(s, d, 0.0, relative)


def log_sq_gevrey(s, a, eps, d, relative=False):
    if not eps > 1:
        raise ValueError("Gevrey order eps must exceed 1")
    if a < 0:
        raise ValueError("Gevrey radius a must be >= 0")
    return _log_sq(s, d, gevrey_exponent(a, eps, s.grid.abs_xi), relative)


def log_sq_osgood(s, a, m, d, relative=False):
    if not a > 0:
        raise ValueError("Osgood radius a must be > 0")
    return _log_sq(s, d, a * osgood_exponent(m, s.grid.sq_xi), relative)


def _root(log_sq):
    return 0.0 if log_sq == -math.inf else math.exp(0.5 * log_sq)


def sobolev_norm(s, d):
    """``sqrt(sum w (1+|xi|^2)^d |u|^2)``."""
    return _root(log_sq_sobolev(s, d))


def gevrey_norm(s, a, eps, d):
    """``sqrt(sum w (1+|xi|^2)^d e^{2a|xi|^{1/eps}} |u|^2)``."""
    return _root(log_sq_gevrey(s, a, eps, d))


def osgood_norm(s, a, m, d):
    """``sqrt(sum w (1+|xi|^2)^d e^{a|xi|^2 w(1/(|xi|^2+1))} |u|^2)``."""
    return _root(log_sq_osgood(s, a, m, d))


@dataclass(frozen=True)
class EmbeddingConstant:
    value: float
    log_value: float
    argmax: object


def embedding_constant(m, nu, eps, grid):
    """``sup_xi exp(|xi|^2 w(1/(|xi|^2+1)) - 2 nu |xi|^{1/eps})`` over the grid.

    ``grid`` is a :class:`FreqGrid` or an array of ``|xi|`` values.
    """
    if isinstance(grid, FreqGrid):
        r, pts = grid.abs_xi, grid.xi
    else:
        r = np.atleast_1d(np.abs(np.asarray(grid, dtype=float)))
        pts = r
    if r.size == 0:
        raise ValueError("embedding constant needs a non-empty grid")
    ex = osgood_exponent(m, r ** 2) - gevrey_exponent(nu, eps, r)
    k = int(np.argmax(ex))
    lv = float(ex[k])
    return EmbeddingConstant(math.exp(lv) if lv < 709 else math.inf, lv, pts[k])
