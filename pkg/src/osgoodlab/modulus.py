"""Moduli of continuity: evaluation, Osgood classification and C^mu seminorms.

A modulus is stored together with its "log ratio" ``r(v) = mu(e^{-v}) e^{v}``,
i.e. ``mu(s)/s`` written in the variable ``v = log(1/s)``.  Every integral of
``1/mu`` in the package is taken in that variable, which keeps the built-in
kinds accurate for arguments far below the double-precision floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate

__all__ = [
    "Modulus",
    "RegularityReport",
    "AxiomReport",
    "ModulusDomainError",
    "QuadratureError",
    "parse_modulus",
    "eval_modulus",
    "osgood_integral",
    "classify_osgood",
    "seminorm",
    "check_modulus_axioms",
    "OSGOOD",
    "NON_OSGOOD",
    "INCONCLUSIVE",
]

OSGOOD = "Osgood"
NON_OSGOOD = "NonOsgood"
INCONCLUSIVE = "Inconclusive"

SEC4_SMAX = math.exp(1.0 - math.e)
# s log(1+1/s) log log(1+1/s) stops increasing near s = 0.1439
LOGLOGLIP_SMAX = 0.1


class ModulusDomainError(ValueError):
    """Raised when a modulus is evaluated outside (0, +inf)."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


def _log1pexp(v):
    # log(1 + e^v), stable for large |v|
    v = np.asarray(v, dtype=float)
    return np.maximum(v, 0.0) + np.log1p(np.exp(-np.abs(v)))


@dataclass(frozen=True)
class Modulus:
    """A modulus of continuity ``mu`` on ``(0, s_max]``.

    ``kind`` is one of ``lipschitz``, ``hoelder``, ``loglip``, ``logloglip``,
    ``sec4`` or ``custom``; ``tau`` is the Hoelder exponent.  For
    ``s > s_max`` the value is frozen at ``mu(s_max)``.
    """

    kind: str
    tau: Optional[float] = None
    s_max: float = 1.0
    func: Optional[Callable] = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("lipschitz", "hoelder", "loglip", "logloglip", "sec4", "custom"):
            raise ValueError(f"unknown modulus kind {self.kind!r}")
        if self.kind == "hoelder" and not (self.tau is not None and 0.0 < self.tau < 1.0):
            raise ValueError("hoelder modulus needs tau in (0, 1)")
        if self.kind == "custom" and self.func is None:
            raise ValueError("custom modulus needs an evaluable func")
        if not (0.0 < self.s_max <= 1.0):
            raise ValueError("s_max must lie in (0, 1]")

    # -- constructors -----------------------------------------------------
    @classmethod
    def lipschitz(cls):
        return cls("lipschitz", label="lipschitz")

    @classmethod
    def hoelder(cls, tau):
        return cls("hoelder", tau=float(tau), label=f"hoelder:{float(tau):g}")

    @classmethod
    def loglip(cls):
        return cls("loglip", label="loglip")

    @classmethod
    def logloglip(cls):
        return cls("logloglip", s_max=LOGLOGLIP_SMAX, label="logloglip")

    @classmethod
    def sec4(cls):
        return cls("sec4", s_max=SEC4_SMAX, label="sec4")

    @classmethod
    def custom(cls, func, s_max=1.0, label="custom"):
        return cls("custom", func=func, s_max=float(s_max), label=label)

    @property
    def name(self):
        return self.label or self.kind

    @property
    def v_min(self):
        """``log(1/s_max)``, the lower end of the log-ratio variable."""
        return -math.log(self.s_max)

    # -- evaluation -------------------------------------------------------
    def _raw(self, s):
        k = self.kind
        if k == "lipschitz":
            return s
        if k == "hoelder":
            return s ** self.tau
        if k == "loglip":
            return s * np.log1p(1.0 / s)
        if k == "logloglip":
            L = np.log1p(1.0 / s)
            return s * L * np.log(L)
        if k == "sec4":
            m = 1.0 - np.log(s)
            return s * m * np.log(m)
        return np.asarray(self.func(s), dtype=float)

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=float)
        if np.any(~(s_arr > 0)):
            raise ModulusDomainError("modulus argument must be > 0")
        clipped = np.minimum(s_arr, self.s_max)
        out = self._raw(clipped)
        if np.ndim(s) == 0:
            return float(out)
        return np.asarray(out, dtype=float)

    def log_ratio(self, v):
        """``mu(e^{-v}) * e^{v}`` for ``v >= v_min``; finite for huge ``v``."""
        v = np.asarray(v, dtype=float)
        k = self.kind
        if k == "lipschitz":
            out = np.ones_like(v)
        elif k == "hoelder":
            out = np.exp((1.0 - self.tau) * v)
        elif k == "loglip":
            out = _log1pexp(v)
        elif k == "logloglip":
            L = _log1pexp(v)
            out = L * np.log(L)
        elif k == "sec4":
            out = (1.0 + v) * np.log1p(v)
        else:
            s = np.exp(-v)
            with np.errstate(over="ignore", invalid="ignore"):
                out = np.asarray(self.func(s), dtype=float) / s
        return out

    def is_builtin_osgood(self):
        return self.kind in ("lipschitz", "loglip", "logloglip", "sec4")


def parse_modulus(text):
    """Build a :class:`Modulus` from its config name.

    >>> parse_modulus("hoelder:0.5").tau
    0.5
    """
    t = text.strip().lower()
    if t == "lipschitz":
        return Modulus.lipschitz()
    if t == "loglip":
        return Modulus.loglip()
    if t == "logloglip":
        return Modulus.logloglip()
    if t == "sec4":
        return Modulus.sec4()
    if t.startswith("hoelder:"):
        try:
            tau = float(t.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad hoelder exponent in {text!r}") from None
        return Modulus.hoelder(tau)
    raise ValueError(f"unknown modulus name {text!r}")


def eval_modulus(m, s):
    return m(s)


def osgood_integral(m, eps, rtol=1e-9):
    """``int_eps^{s_max} ds / mu(s)``, computed in the variable ``v = log(1/s)``."""
    upper = m.s_max
    if not (eps > 0):
        raise ModulusDomainError("eps must be > 0")
    if eps > upper:
        raise ModulusDomainError(f"eps must not exceed the upper limit {upper}")
    if eps == upper:
        return 0.0
    v0, v1 = m.v_min, -math.log(eps)
    val, err = integrate.quad(lambda v: 1.0 / float(m.log_ratio(v)), v0, v1,
                              epsabs=0.0, epsrel=rtol, limit=500)
    if err > max(10 * rtol * abs(val), 1e-300):
        raise QuadratureError(f"osgood_integral: achieved error {err:.3e}", achieved=err)
    return val


def classify_osgood(m, k_max=12, rel_increment=1e-3, cauchy_tol=1e-6):
    """Decide whether ``int_0 ds/mu`` diverges from truncations at ``10^-k``.

    Divergence is declared when every decade increment stays above
    ``rel_increment`` of the running total and the increments do not decay
    by a constant factor.  Convergence is declared when the truncations are
    Cauchy within ``cauchy_tol`` (relative) or the increments decay
    geometrically (the signature of a power-law modulus).
    """
    vals = []
    for k in range(1, k_max + 1):
        eps = 10.0 ** (-k)
        if eps >= m.s_max:
            continue
        vals.append(osgood_integral(m, eps))
    if len(vals) < 3:
        return INCONCLUSIVE
    vals = np.asarray(vals)
    inc = np.diff(vals)
    if np.all(inc <= 0):
        return NON_OSGOOD
    ratios = inc[1:] / inc[:-1]
    tail = ratios[-6:]
    # power-law convergence: decade increments shrink by a fixed factor
    geometric = bool(np.all(tail < 0.999) and np.ptp(tail) < 1e-3)
    if not geometric and np.all(inc > rel_increment * vals[1:]):
        return OSGOOD
    if abs(vals[-1] - vals[-2]) <= cauchy_tol * max(1.0, abs(vals[-1])):
        return NON_OSGOOD
    if geometric:
        return NON_OSGOOD
    return INCONCLUSIVE


@dataclass(frozen=True)
class RegularityReport:
    seminorm: float
    witness_pair: tuple


def seminorm(t, f, m, chunk=2048):
    """``max |f(t_i)-f(t_j)| / mu(|t_i-t_j|)`` over sample pairs with gap in (0, 1)."""
    t = np.asarray(t, dtype=float)
    f = np.asarray(f, dtype=float)
    if t.size < 2 or t.shape != f.shape:
        raise ValueError("seminorm needs at least two paired samples")
    best, pair = 0.0, (float(t[0]), float(t[1]))
    n = t.size
    for i0 in range(0, n, chunk):
        ti = t[i0:i0 + chunk, None]
        fi = f[i0:i0 + chunk, None]
        gap = np.abs(ti - t[None, :])
        ok = (gap > 0) & (gap < 1)
        if not ok.any():
            continue
        ratio = np.zeros_like(gap)
        ratio[ok] = np.abs(fi - f[None, :])[ok] / m(gap[ok])
        idx = np.unravel_index(np.argmax(ratio), ratio.shape)
        if ratio[idx] > best:
            best = float(ratio[idx])
            pair = (float(t[i0 + idx[0]]), float(t[idx[1]]))
    return RegularityReport(best, pair)


@dataclass(frozen=True)
class AxiomReport:
    monotone: bool
    concave: bool
    vanishes: bool

    @property
    def ok(self):
        return self.monotone and self.concave and self.vanishes


def check_modulus_axioms(m, grid_size=100, rtol=1e-12):
    """Check monotonicity, midpoint concavity, positivity and vanishing at 0."""
    if grid_size < 3:
        raise ValueError("grid_size must be >= 3")
    s = m.s_max * np.logspace(-12, 0, grid_size)
    mu = m(s)
    monotone = bool(np.all(np.diff(mu) > 0) and np.all(mu > 0) and np.all(mu <= 1.0 + rtol))
    concave = True
    for step in (1, 2, grid_size // 4 or 1, grid_size - 1):
        a, b = s[:-step], s[step:]
        mid = m(0.5 * (a + b))
        chord = 0.5 * (m(a) + m(b))
        if np.any(mid < chord * (1.0 - rtol)):
            concave = False
            break
    with np.errstate(all="ignore"):
        tail = m(m.s_max * 10.0 ** -np.arange(1.0, 301.0, 10.0))
    vanishes = bool(np.all(np.diff(tail) < 0) and tail[-1] < 1e-6)
    return AxiomReport(monotone, concave, vanishes)
