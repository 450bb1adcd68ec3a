"""Backward parabolic operators with time-only coefficients, solved mode by mode.

With coefficients depending on ``t`` alone, each Fourier mode obeys the
scalar equation ``d/dt u_hat = (A - iB - c) u_hat`` with ``A = sum a_ij xi_i xi_j``
and ``B = sum b_j xi_j``.  Solutions are generated from terminal data at
``t = T`` by integrating the exponent, so there is no time stepping and no
stiffness.  Amplitudes are kept as complex logarithms.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import integrate, signal

from .grid import FreqGrid, Snapshot, log_amp_of
from .modulus import Modulus, QuadratureError, seminorm
from .report import EstimateReport

__all__ = [
    "Constant", "Affine", "Cusp", "Lacunary", "parse_profile",
    "OperatorSpec", "SpectralSolution", "AssumptionReport",
    "symbol", "evolve_mode", "generate_solution", "generate_ensemble", "extend_operator",
    "check_assumptions", "verify_growth_bound", "smoothing_exponent",
    "mollify", "estimate_mollification_constants", "mollification_constants",
    "gronwall_check", "lemma_gamma_check", "shifted_data_log_constant",
    "shifted_data_constant", "shifted_data_check",
]


# -- coefficient profiles --------------------------------------------------

class Profile:
    """A scalar coefficient ``t -> value``; ``integral`` is exact or adaptive."""

    kinks = ()

    def value(self, t):
        raise NotImplementedError

    def integral(self, t0, t1):
        raise NotImplementedError

    def bounds(self, T):
        t = np.linspace(0.0, T, 4097)
        v = self.value(t)
        return float(v.min()), float(v.max())


@dataclass(frozen=True)
class Constant(Profile):
    level: float

    def value(self, t):
        return np.full(np.shape(t), float(self.level))

    def integral(self, t0, t1):
        return self.level * (t1 - t0)

    def bounds(self, T):
        return float(self.level), float(self.level)


@dataclass(frozen=True)
class Affine(Profile):
    level: float
    slope: float

    def value(self, t):
        return self.level + self.slope * np.asarray(t, dtype=float)

    def integral(self, t0, t1):
        return self.level * (t1 - t0) + 0.5 * self.slope * (t1 * t1 - t0 * t0)

    def bounds(self, T):
        ends = (self.level, self.level + self.slope * T)
        return float(min(ends)), float(max(ends))


@dataclass(frozen=True)
class Cusp(Profile):
    """``level + eta * shape(|t - t0|)``; the shape is a modulus, Hoelder by default."""

    level: float
    eta: float
    t0: float
    shape: Modulus = field(default_factory=lambda: Modulus.hoelder(0.5))

    @property
    def kinks(self):
        return (self.t0,)

    def _shape(self, s):
        s = np.asarray(s, dtype=float)
        out = np.zeros_like(s)
        pos = s > 0
        if np.any(pos):
            out[pos] = self.shape(s[pos])
        return out

    def value(self, t):
        return self.level + self.eta * self._shape(np.abs(np.asarray(t, dtype=float) - self.t0))

    def _shape_antideriv(self, x):
        # int_0^x shape(s) ds for x >= 0
        if x <= 0:
            return 0.0
        m = self.shape
        if m.kind == "hoelder" and x <= m.s_max:
            return x ** (1 + m.tau) / (1 + m.tau)
        if m.kind == "lipschitz" and x <= m.s_max:
            return 0.5 * x * x
        head = min(x, m.s_max)
        val, err = integrate.quad(lambda s: float(self._shape(s)), 0.0, head,
                                  epsabs=0.0, epsrel=1e-13, limit=200)
        if err > 1e-10 * max(abs(val), 1e-300):
            raise QuadratureError("cusp integral did not converge", achieved=err)
        return val + (x - head) * float(m(m.s_max))

    def integral(self, t0, t1):
        def F(t):
            d = t - self.t0
            return math.copysign(self._shape_antideriv(abs(d)), d)
        return self.level * (t1 - t0) + self.eta * (F(t1) - F(t0))


@dataclass(frozen=True)
class Lacunary(Profile):
    """``level + eta * sum_k w(e_k) sin(t/e_k)`` with ``e_k = 2^{-2^k}``, ``k = 1..K``."""

    level: float
    eta: float
    omega: Modulus
    K: int = 3

    @property
    def scales(self):
        return np.array([2.0 ** -(2 ** k) for k in range(1, self.K + 1)])

    def value(self, t):
        t = np.asarray(t, dtype=float)
        e = self.scales
        amp = self.omega(e)
        return self.level + self.eta * np.sum(amp * np.sin(t[..., None] / e), axis=-1)

    def integral(self, t0, t1):
        e = self.scales
        amp = self.omega(e)
        osc = np.sum(amp * e * (np.cos(t0 / e) - np.cos(t1 / e)))
        return self.level * (t1 - t0) + self.eta * float(osc)

    def bounds(self, T):
        s = abs(self.eta) * float(np.sum(self.omega(self.scales)))
        return self.level - s, self.level + s


def parse_profile(text):
    """Build a profile from ``constant:v``, ``affine:v,slope``,
    ``cusp:v,eta,t0[,shape]`` or ``lacunary:v,eta,K,modulus``."""
    from .modulus import parse_modulus
    kind, _, rest = text.strip().partition(":")
    args = [a.strip() for a in rest.split(",")] if rest else []
    try:
        if kind == "constant" and len(args) == 1:
            return Constant(float(args[0]))
        if kind == "affine" and len(args) == 2:
            return Affine(float(args[0]), float(args[1]))
        if kind == "cusp" and len(args) in (3, 4):
            shape = parse_modulus(args[3]) if len(args) == 4 else Modulus.hoelder(0.5)
            return Cusp(float(args[0]), float(args[1]), float(args[2]), shape)
        if kind == "lacunary" and len(args) == 4:
            return Lacunary(float(args[0]), float(args[1]), parse_modulus(args[3]), int(args[2]))
    except ValueError as exc:
        raise ValueError(f"bad profile {text!r}: {exc}") from None
    raise ValueError(f"unknown profile {text!r}")


# -- the operator ----------------------------------------------------------

def _frozen_integral(p, t0, t1, T):
    """``int_t0^t1 p(clip(s, 0, T)) ds``: coefficients are frozen outside ``[0, T]``."""
    if t1 < t0:
        return -_frozen_integral(p, t1, t0, T)
    total = 0.0
    if t0 < 0:
        total += float(p.value(0.0)) * (min(t1, 0.0) - t0)
    if t1 > T:
        total += float(p.value(T)) * (t1 - max(t0, T))
    lo, hi = max(t0, 0.0), min(t1, T)
    if hi > lo:
        total += p.integral(lo, hi)
    return total


@dataclass(frozen=True)
class OperatorSpec:
    """Coefficients ``a`` (symmetric ``n x n``), ``b`` (``n``), ``c`` on ``[t_min, T]``."""

    n: int
    T: float
    a: tuple
    b: tuple
    c: Profile
    kA: float
    kB: float
    kC: float
    omega: Modulus
    t_min: float = 0.0
    label: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if not self.T > 0:
            raise ValueError("T must be positive")
        a = tuple(tuple(row) for row in self.a)
        if len(a) != self.n or any(len(r) != self.n for r in a):
            raise ValueError("a must be n x n")
        for i in range(self.n):
            for j in range(i):
                if a[i][j] != a[j][i]:
                    raise ValueError("a must be symmetric")
        object.__setattr__(self, "a", a)
        if len(self.b) != self.n:
            raise ValueError("b must have n components")
        object.__setattr__(self, "b", tuple(self.b))
        if not (0 < self.kA <= 1) or self.kB < 0 or self.kC < 0:
            raise ValueError("need 0 < kA <= 1 and kB, kC >= 0")

    @classmethod
    def constant(cls, n=1, T=1.0, a=None, b=None, c=0.0, kA=1.0, kB=0.0, kC=0.0,
                 omega=None, label="constant"):
        a = np.eye(n) if a is None else np.asarray(a, dtype=float)
        b = np.zeros(n) if b is None else np.asarray(b, dtype=float)
        prof = tuple(tuple(Constant(float(a[i, j])) for j in range(n)) for i in range(n))
        return cls(n, T, prof, tuple(Constant(float(x)) for x in b), Constant(float(c)),
                   kA, kB, kC, omega or Modulus.lipschitz(), label=label)

    def _clip(self, t):
        return np.clip(np.asarray(t, dtype=float), 0.0, self.T)

    def a_matrix(self, t):
        tc = self._clip(t)
        return np.stack([np.stack([self.a[i][j].value(tc) for j in range(self.n)], -1)
                         for i in range(self.n)], -2)

    def b_vector(self, t):
        tc = self._clip(t)
        return np.stack([p.value(tc) for p in self.b], -1)

    def c_value(self, t):
        return self.c.value(self._clip(t))

    def profiles(self):
        return [self.a[i][j] for i in range(self.n) for j in range(i, self.n)] + list(self.b) + [self.c]

    @property
    def kinks(self):
        pts = {0.0, self.T}
        for p in self.profiles():
            pts.update(k for k in p.kinks if 0 <= k <= self.T)
        return sorted(pts)

    def integrals(self, t0, t1):
        """``(int a, int b, int c)`` over ``[t0, t1]`` with frozen extension."""
        n, T = self.n, self.T
        Ja = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                Ja[i, j] = Ja[j, i] = _frozen_integral(self.a[i][j], t0, t1, T)
        Jb = np.array([_frozen_integral(p, t0, t1, T) for p in self.b])
        Jc = _frozen_integral(self.c, t0, t1, T)
        return Ja, Jb, Jc


def symbol(spec, t, xi):
    """``(A, B) = (sum a_ij(t) xi_i xi_j, sum b_j(t) xi_j)``."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    A = float(xi @ spec.a_matrix(t) @ xi)
    B = float(spec.b_vector(t) @ xi)
    return A, B


def extend_operator(spec, l):
    """The same operator on ``[-l, T]`` with coefficients frozen at their ``t = 0`` values."""
    if not l > 0:
        raise ValueError("extension length must be positive")
    return replace(spec, t_min=-float(l))


def evolve_mode(spec, xi, u_T, t, rtol=1e-12, log=False):
    """``u_hat(t) = u_T exp(-I_A + I_c + i I_B)`` with adaptive quadrature of the symbol."""
    if not (spec.t_min - 1e-15 <= t <= spec.T):
        raise ValueError(f"t must lie in [{spec.t_min}, {spec.T}]")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    pts = [p for p in spec.kinks if t < p < spec.T]
    if t < 0 < spec.T:
        pts.append(0.0)

    def q(f):
        if t == spec.T:
            return 0.0
        val, err = integrate.quad(f, t, spec.T, epsabs=0.0, epsrel=rtol, limit=500,
                                  points=sorted(set(pts)) or None)
        if err > 100 * rtol * max(abs(val), 1e-300) and err > 1e-300:
            raise QuadratureError("mode exponent quadrature did not converge", achieved=err)
        return val

    IA = q(lambda s: symbol(spec, s, xi)[0])
    IB = q(lambda s: symbol(spec, s, xi)[1])
    Ic = q(lambda s: float(spec.c_value(s)))
    expo = complex(-IA + Ic, IB)
    if log:
        return complex(log_amp_of(u_T)) + expo
    return complex(u_T) * np.exp(expo)


# -- solutions -------------------------------------------------------------

@dataclass
class SpectralSolution:
    """Exact mode amplitudes on ``times x grid``.

    ``u_hat(t_j, xi_m) = exp(log_scale + log_amp[j, m])``; the common real
    ``log_scale`` lets the data sit far below double range.
    """

    spec: OperatorSpec
    grid: FreqGrid
    times: np.ndarray
    log_amp: np.ndarray
    log_uT: np.ndarray
    threads: int = 1
    log_scale: float = 0.0

    @property
    def amps(self):
        return np.exp(self.log_scale + self.log_amp)

    def rescaled(self, log_scale):
        """The same solution multiplied by ``exp(log_scale - self.log_scale)``."""
        return replace(self, log_scale=float(log_scale))

    def exponent_at(self, t):
        """``log u_hat(t) - log u_hat(T)`` for every mode at the times ``t``."""
        return _exponents(self.spec, self.grid, np.atleast_1d(t), self.threads)

    def log_amp_at(self, t):
        return self.log_uT[None, :] + self.exponent_at(t)

    def snapshot(self, j):
        return Snapshot(self.grid, self.log_amp[j], self.log_scale)

    def snapshot_at(self, t):
        j = np.flatnonzero(self.times == t)
        if j.size:
            return self.snapshot(int(j[0]))
        return Snapshot(self.grid, self.log_amp_at([t])[0], self.log_scale)

    def index_of(self, t):
        j = int(np.argmin(np.abs(self.times - t)))
        if not math.isclose(self.times[j], t, rel_tol=0, abs_tol=1e-12 * max(1, abs(t))):
            raise KeyError(f"time {t} is not on the grid")
        return j

    def to_csv(self):
        """Rows ``t, xi_1..xi_n, Re, Im, log|u|, arg`` (the last two are lossless)."""
        # log|u| is written relative to log_scale, which is echoed in the header
        from .report import fmt
        n = self.grid.n
        head = ["t"] + [f"xi{k + 1}" for k in range(n)] + ["re", "im", "log_abs", "arg"]
        lines = [f"# log_scale={fmt(self.log_scale)}", ",".join(head)]
        vals = self.amps
        for j, t in enumerate(self.times):
            for m in range(self.grid.size):
                row = [t, *self.grid.xi[m], vals[j, m].real, vals[j, m].imag,
                       self.log_amp[j, m].real, self.log_amp[j, m].imag]
                lines.append(",".join(fmt(x) for x in row))
        return "\n".join(lines) + "\n"


def _exponent_one(spec, xi, t):
    Ja, Jb, Jc = spec.integrals(t, spec.T)
    A = np.einsum("mi,ij,mj->m", xi, Ja, xi)
    B = xi @ Jb
    return -A + Jc + 1j * B


def _exponents(spec, grid, times, threads=1):
    xi = grid.xi
    work = lambda t: _exponent_one(spec, xi, float(t))
    if threads and threads > 1 and len(times) > 1:
        # ordered map: the result does not depend on scheduling
        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(work, times))
    else:
        rows = [work(t) for t in times]
    return np.array(rows, dtype=complex).reshape(len(times), grid.size)


def _checked_times(spec, grid, times):
    times = np.asarray(times, dtype=float).ravel()
    if times.size == 0 or np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be non-empty and increasing")
    if times[0] < spec.t_min - 1e-15 or times[-1] > spec.T + 1e-15:
        raise ValueError(f"times must lie in [{spec.t_min}, {spec.T}]")
    if grid.n != spec.n:
        raise ValueError("grid dimension does not match the operator")
    return times


def generate_solution(spec, grid, terminal, times, threads=1, log_scale=0.0):
    """Evolve terminal data ``u_hat(T, .)`` back to every time in ``times``.

    ``terminal`` is an array of complex values aligned with ``grid``, a
    :class:`Snapshot` (to pass amplitudes as logarithms), or ``None`` /
    empty for the zero solution.
    """
    times = _checked_times(spec, grid, times)
    if isinstance(terminal, Snapshot):
        log_uT = terminal.log_amp
        log_scale = log_scale + terminal.log_scale
    elif terminal is None or np.size(terminal) == 0:
        log_uT = np.full(grid.size, -np.inf + 0j)
    else:
        log_uT = log_amp_of(np.asarray(terminal, dtype=complex).ravel())
        if log_uT.size != grid.size:
            raise ValueError("terminal data must be supported on the frequency grid")
    E = _exponents(spec, grid, times, threads)
    return _assemble(spec, grid, times, E, log_uT, threads, log_scale)


def _assemble(spec, grid, times, E, log_uT, threads, log_scale):
    with np.errstate(invalid="ignore"):
        la = log_uT[None, :] + E
    la[:, np.isneginf(log_uT.real)] = -np.inf + 0j
    return SpectralSolution(spec, grid, times, la, log_uT, threads, float(log_scale))


def generate_ensemble(spec, grid, terminals, times, threads=1):
    """:func:`generate_solution` for many terminal arrays, sharing the mode exponents."""
    times = _checked_times(spec, grid, times)
    terminals = [np.asarray(u, dtype=complex).ravel() for u in terminals]
    if any(u.size != grid.size for u in terminals):
        raise ValueError("terminal data must be supported on the frequency grid")
    if not terminals:
        return []
    E = _exponents(spec, grid, times, threads)
    return [_assemble(spec, grid, times, E, log_amp_of(u), threads, 0.0) for u in terminals]


# -- checks ----------------------------------------------------------------

@dataclass(frozen=True)
class AssumptionReport:
    symmetric: bool
    elliptic: bool
    b_bounded: bool
    c_bounded: bool
    seminorms: tuple

    @property
    def ok(self):
        return (self.symmetric and self.elliptic and self.b_bounded and self.c_bounded
                and all(np.isfinite(self.seminorms)))


def check_assumptions(spec, samples=1025, directions=64, rtol=1e-12):
    """Symmetry, ellipticity in ``[kA, 1/kA]``, ``|b| <= kB``, ``|c| <= kC`` and finite seminorms."""
    t = np.linspace(0.0, spec.T, samples)
    a = spec.a_matrix(t)
    sym = bool(np.allclose(a, np.swapaxes(a, -1, -2), rtol=0, atol=0))
    eig = np.linalg.eigvalsh(a)
    ell = bool(eig.min() >= spec.kA * (1 - rtol) and eig.max() <= (1 + rtol) / spec.kA)
    bb = bool(np.all(np.abs(spec.b_vector(t)) <= spec.kB * (1 + rtol)))
    cb = bool(np.all(np.abs(spec.c_value(t)) <= spec.kC * (1 + rtol)))
    # time measured in units where all sampled gaps are below one
    tt = t / max(spec.T, 1.0 + 1e-12) if spec.T >= 1 else t
    semi = tuple(seminorm(tt, spec.a[i][j].value(t), spec.omega).seminorm
                 for i in range(spec.n) for j in range(i, spec.n))
    return AssumptionReport(sym, ell, bb, cb, semi)


def _growth_log_rate(spec, grid):
    r = grid.abs_xi
    return 2 * spec.kA * r ** 2 - 2 * spec.n * spec.kB * r - 2 * spec.kC


def _normalized(log_lhs, log_rhs):
    """Sides divided by the right side, with ``0 <= 0`` for vanishing modes."""
    zero = np.isneginf(log_rhs) & np.isneginf(log_lhs)
    scale = np.where(np.isneginf(log_rhs), 0.0, log_rhs)
    with np.errstate(invalid="ignore", over="ignore"):
        lhs = np.where(zero, 0.0, np.exp(log_lhs - scale))
        rhs = np.where(zero | np.isneginf(log_rhs), 0.0, 1.0)
    return lhs, rhs, scale


def verify_growth_bound(sol, tol=1e-10):
    """``|u_hat(t)|^2 <= exp((2kA|xi|^2 - 2n kB|xi| - 2kC)(t - T)) |u_hat(T)|^2`` per mode."""
    spec, grid = sol.spec, sol.grid
    rate = _growth_log_rate(spec, grid)
    log_lhs = 2 * sol.log_amp.real
    log_rhs = rate[None, :] * (sol.times[:, None] - spec.T) + 2 * sol.log_uT.real[None, :]
    lhs, rhs, scale = _normalized(log_lhs, log_rhs)
    scale = scale + 2 * sol.log_scale
    ids = [f"t={t:.6g};m={m}" for t in sol.times for m in range(grid.size)]
    return EstimateReport("growth", ids, lhs, rhs, scale, tol=tol)


def lemma_gamma_check(sol, gamma_bar, tol=1e-12):
    """``exp(2 gamma t) |u_hat(t)|^2`` non-decreasing along the time grid, per mode."""
    lg = 2 * gamma_bar * sol.times[:, None] + 2 * sol.log_amp.real
    log_lhs, log_rhs = lg[:-1], lg[1:]
    lhs, rhs, scale = _normalized(log_lhs, log_rhs)
    ids = [f"t={t:.6g};m={m}" for t in sol.times[:-1] for m in range(sol.grid.size)]
    return EstimateReport("lemma_gamma", ids, lhs, rhs, scale, tol=tol)


def gronwall_check(t, u, M, tol=1e-12):
    """``u(t_j) <= exp(M (t_j - T)) u(T)`` for a sampled positive trajectory ending at ``T``."""
    t = np.asarray(t, dtype=float)
    u = np.asarray(u, dtype=float)
    rhs = np.exp(M * (t - t[-1])) * u[-1]
    return EstimateReport("gronwall", [f"t={x:.6g}" for x in t], u, rhs, tol=tol)


def smoothing_exponent(sol, window=None):
    """Slope of ``log ||u(t)||_{H^1}`` against ``-log(T - t)`` over ``T - t`` in ``window``.

    The default window is the decade ``T - t`` in ``[1e-3 T, 1e-2 T]``.
    """
    from .norms import log_sq_sobolev
    T = sol.spec.T
    lo, hi = window if window is not None else (1e-3 * T, 1e-2 * T)
    s = T - sol.times
    sel = (s > 0) & (s >= lo * (1 - 1e-12)) & (s <= hi * (1 + 1e-12))
    if sel.sum() < 4:
        raise ValueError("need at least 4 time samples in the fit window")
    ln = np.array([0.5 * log_sq_sobolev(sol.snapshot(j), 1, relative=True) for j in np.flatnonzero(sel)])
    if not np.all(np.isfinite(ln)):
        raise ValueError("degenerate fit: the solution vanishes")
    slope = np.polyfit(-np.log(s[sel]), ln, 1)[0]
    return float(slope)


def mollify(t, f, eps):
    """Convolve uniformly sampled ``f`` with a smooth bump supported in ``[-eps, eps]``.

    The profile is extended by its end values beyond the sample range.
    """
    t = np.asarray(t, dtype=float)
    f = np.asarray(f, dtype=float)
    dt = t[1] - t[0]
    if not np.allclose(np.diff(t), dt, rtol=1e-9, atol=0):
        raise ValueError("mollify needs a uniform time grid")
    if eps < 2 * dt:
        raise ValueError("eps must be at least two sample steps")
    k = int(math.floor(eps / dt))
    x = np.arange(-k, k + 1) * dt / eps
    with np.errstate(divide="ignore", over="ignore"):
        ker = np.where(np.abs(x) < 1, np.exp(-1.0 / np.maximum(1 - x * x, 1e-300)), 0.0)
    ker /= ker.sum()
    padded = np.concatenate((np.full(k, f[0]), f, np.full(k, f[-1])))
    return signal.fftconvolve(padded, ker, mode="valid") if f.size > 256 else np.convolve(padded, ker, mode="valid")


@dataclass(frozen=True)
class MollificationConstants:
    C0: float
    C1: float


def estimate_mollification_constants(t, f, m, eps_grid=None):
    """``C0 = max |f_e - f| / w(e)`` and ``C1 = max |f_e'| e / w(e)`` over ``t`` and ``eps_grid``."""
    t = np.asarray(t, dtype=float)
    f = np.asarray(f, dtype=float)
    dt = t[1] - t[0]
    if eps_grid is None:
        eps_grid = np.geomspace(4 * dt, 0.25 * (t[-1] - t[0]), 10)
    C0 = C1 = 0.0
    for e in np.atleast_1d(eps_grid):
        fe = mollify(t, f, e)
        we = float(m(e))
        C0 = max(C0, float(np.max(np.abs(fe - f))) / we)
        C1 = max(C1, float(np.max(np.abs(np.gradient(fe, dt)))) * e / we)
    # remove summation round-off on exactly constant data
    if np.ptp(f) == 0:
        C0 = C1 = 0.0
    return MollificationConstants(C0, C1)


def mollification_constants(spec, samples=2 ** 14, eps_grid=None):
    """Largest ``(C0, C1)`` over the entries of ``a`` sampled on ``[0, T]``."""
    t = np.linspace(0.0, spec.T, samples + 1)
    C0 = C1 = 0.0
    for i in range(spec.n):
        for j in range(i, spec.n):
            mc = estimate_mollification_constants(t, spec.a[i][j].value(t), spec.omega, eps_grid)
            C0, C1 = max(C0, mc.C0), max(C1, mc.C1)
    return MollificationConstants(C0, C1)


def shifted_data_log_constant(spec, grid, l, nu, eps):
    """``log sup_xi exp(2 nu |xi|^{1/eps} - l (2kA|xi|^2 - 2n kB|xi| - 2kC))`` on the grid."""
    r = grid.abs_xi
    return float(np.max(2 * nu * r ** (1.0 / eps) - l * _growth_log_rate(spec, grid)))


def shifted_data_constant(spec, grid, l, nu, eps):
    """Norm-level factor: ``||u(-l)||_{H^0_{nu,eps}} <= C ||u(0)||_{L^2}``."""
    return math.exp(0.5 * shifted_data_log_constant(spec, grid, l, nu, eps))


def shifted_data_check(sol, l, nu, eps, tol=1e-10):
    """Compare ``||u(-l)||^2_{H^0_{nu,eps}}`` with the squared constant times ``||u(0)||^2``."""
    from .norms import log_sq_gevrey, log_sq_sobolev
    la_l = sol.log_amp_at([-l])[0]
    la_0 = sol.log_amp_at([0.0])[0]
    log_lhs = log_sq_gevrey(Snapshot(sol.grid, la_l), nu, eps, 0)
    log_rhs = shifted_data_log_constant(sol.spec, sol.grid, l, nu, eps) + log_sq_sobolev(Snapshot(sol.grid, la_0), 0)
    # both sides carry the same 2 log_scale, which is left out
    lhs, rhs, scale = _normalized(np.array([log_lhs]), np.array([log_rhs]))
    return EstimateReport("shifted_data", [f"l={l:.6g}"], lhs, rhs, scale, tol=tol)
