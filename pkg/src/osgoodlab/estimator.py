"""Constants, weighted energy estimates and stability bounds.

All inequalities are compared in logarithmic form: the weights involved
(``exp(-2 beta phi)``, ``h``, the admissible data sizes) leave double range
long before the estimates become interesting.  Reports carry sides divided
by a per-item scale ``exp(log_scale)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from functools import cached_property

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import logsumexp

from .grid import FreqGrid, Snapshot
from .modulus import Modulus
from .norms import (embedding_constant, log_sq_gevrey, log_sq_osgood, log_sq_sobolev,
                    osgood_exponent)
from .operator import mollification_constants
from .report import EstimateReport, fmt
from .weights import WeightCalculus, WeightOverflow

__all__ = [
    "EstimateConstants", "AdmissibilityError", "SearchFailure",
    "find_alpha1_gamma1", "select_constants", "alpha_gamma_expression",
    "choose_beta", "BetaChoice", "pointwise_estimate_check", "integral_estimate_check",
    "local_bound", "local_estimate_check", "global_bound_G", "GlobalBound",
    "sandwich_check", "explicit_bound_sec4", "Sec4Bound", "sec4_log_rho_bound",
    "appendix_ratio", "regime_probe", "interval_schedule", "local_estimate_check",
]

_GX, _GW = leggauss(16)
_LOG_MAX = math.log(np.finfo(float).max)


class AdmissibilityError(ValueError):
    """Data too large for an estimate; ``threshold`` names the guard that failed."""

    def __init__(self, threshold, value, limit, detail=""):
        msg = f"{threshold}: {value:.6g} not below {limit:.6g}"
        super().__init__(msg + (f" ({detail})" if detail else ""))
        self.threshold = threshold
        self.value = value
        self.limit = limit


class SearchFailure(RuntimeError):
    def __init__(self, message, worst_xi=None):
        super().__init__(message)
        self.worst_xi = worst_xi


# -- alpha_1, gamma_1 ------------------------------------------------------

def alpha_gamma_expression(r, alpha1, gamma1, *, T, n, kA, kB, kC, C0, C1, omega):
    """Left side of the condition fixing ``(alpha1, gamma1)`` at ``|xi| = r``."""
    r = np.asarray(r, dtype=float)
    r2 = r * r
    w = omega(1.0 / (r2 + 1.0))
    return (gamma1 / (4 * T)
            + 0.5 * alpha1 * kA * r2 * r2 * w
            - C0 ** 2 * n ** 4 * r2 * r2 * w
            - C1 * n ** 2 * r2 * (r2 + 1.0) * w
            - 2 * n ** 2 * kB ** 2 * r2
            - 2 * kC ** 2
            - 0.5 * alpha1 ** 2 * r2 * r2 * w * w
            - alpha1 * r2 * w * kC)


@dataclass(frozen=True)
class AlphaGamma:
    alpha1: float
    gamma1: float
    min_value: float
    worst_xi: float
    C0: float
    C1: float


def find_alpha1_gamma1(spec, xi_scan=None, xi_max=1e3, C0=None, C1=None, horizon=None,
                       margin=1e-9, max_doublings=80):
    """Smallest doubling ``alpha1 >= 1/T`` whose scan tail is positive, then ``gamma1``.

    ``gamma1`` is ``4T`` times the positive part of the most negative scanned
    value of the remaining terms, enlarged by ``margin``; the scan is then
    repeated as a certificate.
    """
    T = spec.T if horizon is None else float(horizon)
    if C0 is None or C1 is None:
        mc = mollification_constants(spec)
        C0 = mc.C0 if C0 is None else C0
        C1 = mc.C1 if C1 is None else C1
    if xi_scan is None:
        xi_scan = np.concatenate(([0.0], np.logspace(-2, math.log10(xi_max), 512)))
    r = np.asarray(xi_scan, dtype=float)
    kw = dict(T=T, n=spec.n, kA=spec.kA, kB=spec.kB, kC=spec.kC, C0=C0, C1=C1, omega=spec.omega)
    alpha1 = 1.0 / T
    tail = slice(-8, None)
    for _ in range(max_doublings):
        E = alpha_gamma_expression(r, alpha1, 0.0, **kw)
        if np.all(E[tail] > 0) and np.all(np.diff(E[tail]) > 0):
            break
        alpha1 *= 2.0
    else:
        k = int(np.argmin(alpha_gamma_expression(r, alpha1, 0.0, **kw)))
        raise SearchFailure("no admissible alpha1 below the doubling guard", worst_xi=float(r[k]))
    E = alpha_gamma_expression(r, alpha1, 0.0, **kw)
    deficit = max(0.0, -float(E.min()))
    gamma1 = 4 * T * deficit * (1 + margin) + (4 * T * margin if deficit > 0 else 0.0)
    cert = alpha_gamma_expression(r, alpha1, gamma1, **kw)
    k = int(np.argmin(cert))
    if cert[k] < 0:
        raise SearchFailure("certificate scan is negative", worst_xi=float(r[k]))
    return AlphaGamma(alpha1, gamma1, float(cert[k]), float(r[k]), float(C0), float(C1))


# -- constants -------------------------------------------------------------

@dataclass(frozen=True)
class EstimateConstants:
    T: float
    T2: float
    n: int
    kA: float
    kB: float
    kC: float
    omega: Modulus
    alpha1: float
    gamma1: float
    alpha: float
    sigma: float
    sigma_bar: float
    tau: float
    lam_bar: float
    lam: float
    gamma_new: float
    gamma_lemma: float
    gamma: float
    c1: float
    c2: float
    log_C: float
    delta1: float
    C0: float
    C1: float
    provenance: dict = field(default_factory=dict, compare=False)

    @property
    def q(self):
        return self.kA

    @property
    def C(self):
        return math.exp(self.log_C) if self.log_C < _LOG_MAX else math.inf

    @cached_property
    def weights(self):
        return WeightCalculus(self.omega, self.lam, self.kA)

    @cached_property
    def log_h_edge(self):
        """``log h(tau/(sigma+tau))``, or ``inf`` when it is not representable."""
        try:
            return float(self.weights.log_h(self.tau, self.tau / (self.sigma + self.tau)))
        except (WeightOverflow, ArithmeticError):
            return math.inf

    @property
    def log_y_max(self):
        """Admissible squared data norms satisfy ``log y < log_y_max``."""
        return min(-math.log(self.q), -self.log_h_edge)

    def to_text(self):
        """Flat ``key=value`` block, one constant per line with its binding threshold."""
        lines = []
        for k, v in asdict(self).items():
            if k == "provenance":
                continue
            if k == "omega":
                v = self.omega.name
            elif isinstance(v, float):
                v = fmt(v)
            lines.append(f"{k}={v}")
        lines.append(f"C={fmt(self.C)}")
        lines.append(f"log_h_edge={fmt(self.log_h_edge)}")
        for k in sorted(self.provenance):
            lines.append(f"provenance.{k}={self.provenance[k]}")
        return "\n".join(lines) + "\n"


def select_constants(spec, T2, tau_override=None, horizon=None, sec4=None, xi_max=1e3,
                     C0=None, C1=None, ag=None):
    """All constants of the local estimate for the interval ending at ``T2``.

    ``horizon`` replaces ``T`` when the estimate is applied on a later
    subinterval; ``sec4`` selects the smaller ``tau`` used for the explicit
    modulus (default: on when ``omega`` is the sec4 modulus).
    """
    T = spec.T if horizon is None else float(horizon)
    if not (0 < T2 < T):
        raise ValueError(f"T'' must lie in (0, {T})")
    if ag is None:
        ag = find_alpha1_gamma1(spec, xi_max=xi_max, C0=C0, C1=C1, horizon=T)
    kA, kB, kC, n = spec.kA, spec.kB, spec.kC, spec.n
    prov = {}
    alpha = max(ag.alpha1, 1.0 / T2)
    prov["alpha"] = "alpha1" if ag.alpha1 >= 1.0 / T2 else "1/T''"
    sigma = 1.0 / alpha
    if sec4 is None:
        sec4 = spec.omega.kind == "sec4"
    tau_max = min(sigma / 4, sigma * kA / (4 * math.e)) if sec4 else sigma / 4
    if tau_override is not None:
        if not (0 < tau_override <= tau_max):
            raise ValueError(f"tau must lie in (0, {tau_max}]")
        tau = float(tau_override)
        prov["tau"] = "override"
    else:
        tau = tau_max
        prov["tau"] = "sigma kA/(4e)" if (sec4 and tau_max < sigma / 4) else "sigma/4"
    lam_bar = max(4 / kA, 16 * T * alpha / kA)
    prov["lam"] = "4/kA" if 4 / kA >= 16 * T * alpha / kA else "16 T alpha/kA"
    g_new = max(ag.gamma1, 8 * T * alpha * kA * float(spec.omega(0.5)))
    g_lem = 2 * max(kC, n * n * kB * kB / kA)
    gamma = max(g_new, g_lem)
    if gamma == g_lem and g_lem > g_new:
        prov["gamma"] = "2 max(kC, n^2 kB^2/kA)"
    else:
        prov["gamma"] = "gamma1" if ag.gamma1 >= 8 * T * alpha * kA * float(spec.omega(0.5)) else "8 T alpha kA w(1/2)"
    c1 = 0.25 * min(kA, gamma)
    c2 = max(gamma, 1 / kA)
    logC_a = -math.log(c1)
    logC_b = math.log(c2) + math.log(sigma + tau) + 2 * gamma * sigma - math.log(c1 * tau)
    log_C = max(logC_a, logC_b)
    prov["C"] = "1/c1" if logC_a >= logC_b else "c2 (sigma+tau) e^{2 gamma sigma}/(c1 tau)"
    delta1 = ((sigma + tau) / tau) ** (-lam_bar * kA)
    return EstimateConstants(T=T, T2=float(T2), n=n, kA=kA, kB=kB, kC=kC, omega=spec.omega,
                             alpha1=ag.alpha1, gamma1=ag.gamma1, alpha=alpha, sigma=sigma,
                             sigma_bar=sigma / 8, tau=tau, lam_bar=lam_bar, lam=lam_bar,
                             gamma_new=g_new, gamma_lemma=g_lem, gamma=gamma, c1=c1, c2=c2,
                             log_C=log_C, delta1=delta1, C0=ag.C0, C1=ag.C1, provenance=prov)


# -- beta ------------------------------------------------------------------

@dataclass(frozen=True)
class BetaChoice:
    beta: float
    z: float
    log_residual: float

    @property
    def identity_error(self):
        """``phi'(tau/beta) e^{-2 beta phi(tau/beta)} y - 1``."""
        return math.expm1(self.log_residual) if self.log_residual < _LOG_MAX else math.inf


def _log_identity(wc, tau, beta, log_y):
    z = tau / beta
    return float(wc.log_phi_prime(z)) + 2 * beta * math.exp(float(wc.log_neg_phi(z))) + log_y


def _admissible(consts, log_y, name="data"):
    if not log_y < -math.log(consts.q):
        raise AdmissibilityError(f"{name} < 1/q", log_y, -math.log(consts.q), "log of squared norm")
    if not log_y < -consts.log_h_edge:
        raise AdmissibilityError(f"{name} < 1/h(tau/(sigma+tau))", log_y, -consts.log_h_edge,
                                 "log of squared norm")


def choose_beta(consts, y=None, log_y=None):
    """``beta = tau / h^{-1}(1/y)`` for the squared ``H^0_{1,w}`` norm ``y`` of ``u(0)``."""
    if log_y is None:
        if y is None or not y > 0:
            raise ValueError("choose_beta needs y > 0")
        log_y = math.log(y)
    _admissible(consts, log_y)
    wc = consts.weights
    z = wc.h_inv(consts.tau, log_y=-log_y)
    beta = consts.tau / z
    return BetaChoice(beta, z, _log_identity(wc, consts.tau, beta, log_y))


# -- pointwise estimate ----------------------------------------------------

def _panel_nodes(edges):
    a, b = edges[:-1], edges[1:]
    half, mid = 0.5 * (b - a), 0.5 * (b + a)
    t = (mid[:, None] + half[:, None] * _GX).ravel()
    w = (half[:, None] * _GW).ravel()
    return t, w


def _re_exponent_from0(spec, grid, t):
    """``2 int_0^t (A - c)`` per mode, shape ``(len(t), M)``."""
    xi = grid.xi
    out = np.empty((len(t), grid.size))
    for k, tk in enumerate(t):
        Ja, _, Jc = spec.integrals(0.0, float(tk))
        out[k] = 2 * (np.einsum("mi,ij,mj->m", xi, Ja, xi) - Jc)
    return out


def pointwise_estimate_check(sol, consts, beta, modes=None, tol=1e-8):
    """Weighted time integral of ``|u_hat|^2`` on ``[0, sigma]`` against its two boundary terms.

    Each side is divided by ``exp(|xi|^2 w - 2 beta phi(tau/beta)) |u_hat(0)|^2``.
    """
    sigma, tau, gamma, alpha, kA = consts.sigma, consts.tau, consts.gamma, consts.alpha, consts.kA
    if beta < sigma + tau:
        raise ValueError(f"beta = {beta} is below sigma + tau = {sigma + tau}")
    spec, grid, wc = sol.spec, sol.grid, consts.weights
    M = grid.size
    modes = np.arange(M) if modes is None else np.asarray(modes)
    X = osgood_exponent(consts.omega, grid.sq_xi)
    z0 = tau / beta
    lphi0 = float(wc.log_phi_prime(z0))
    la0 = sol.log_amp_at([0.0])[0]  # relative to log_scale
    # slope of the exponent at t = 0 sets the width of the first panels
    A0 = np.einsum("mi,ij,mj->m", grid.xi, spec.a_matrix(0.0), grid.xi)
    slope = np.abs(-alpha * X + 2 * gamma - 2 * math.exp(lphi0) + 2 * (A0 - float(spec.c_value(0.0))))
    scale = 1.0 / max(float(slope[modes].max()), 1.0 / sigma)
    geo = scale * 2.0 ** np.arange(-6, 64)
    edges = np.unique(np.concatenate(([0.0], geo[geo < sigma], np.linspace(0, sigma, 129))))
    t, w = _panel_nodes(edges)
    with np.errstate(divide="ignore"):
        inc = 2 * beta * np.exp(wc.log_phi_increment(np.full(t.shape, z0), (t + tau) / beta))
        inc_s = 2 * beta * math.exp(wc.log_phi_increment(z0, (sigma + tau) / beta))
    growth = _re_exponent_from0(spec, grid, np.concatenate((t, [sigma])))
    ids, lhs, rhs, scl = [], [], [], []
    for m in modes:
        ids.append(f"m={m};|xi|={grid.abs_xi[m]:.6g}")
        if np.isneginf(la0[m].real):
            lhs.append(0.0); rhs.append(0.0); scl.append(0.0)
            continue
        F = -alpha * t * X[m] + 2 * gamma * t - inc + growth[:-1, m]
        log_lhs = math.log(0.25 * (kA * grid.sq_xi[m] + gamma)) + float(logsumexp(F, b=w))
        log_r1 = lphi0 + math.log(tau)
        log_r2 = (math.log((sigma + tau) * (gamma + grid.sq_xi[m] / kA))
                  + 2 * gamma * sigma - inc_s + growth[-1, m] - X[m])
        log_rhs = float(np.logaddexp(log_r1, log_r2))
        s0 = X[m] + 2 * beta * math.exp(float(wc.log_neg_phi(z0))) + 2 * (la0[m].real + sol.log_scale)
        lhs.append(math.exp(log_lhs - log_rhs)); rhs.append(1.0); scl.append(s0 + log_rhs)
    return EstimateReport("pointwise", ids, lhs, rhs, scl, tol=tol, constants=consts)


# -- integral and local estimates -----------------------------------------

def _times_in(sol, lo, hi):
    sel = np.flatnonzero((sol.times >= lo - 1e-14) & (sol.times <= hi + 1e-14))
    if sel.size == 0:
        raise ValueError(f"no solution samples in [{lo}, {hi}]")
    return sel


def _log_item(name, ident, log_lhs, log_rhs, consts, tol, extra_scale=0.0):
    # both sides are logs relative to a common offset extra_scale
    if np.isneginf(log_lhs) and np.isneginf(log_rhs):
        return EstimateReport(name, [ident], [0.0], [0.0], [0.0], tol=tol, constants=consts)
    lhs = math.exp(min(log_lhs - log_rhs, _LOG_MAX)) if not np.isneginf(log_lhs) else 0.0
    return EstimateReport(name, [ident], [lhs], [1.0], [log_rhs + extra_scale], tol=tol,
                          constants=consts)


def integral_estimate_check(sol, consts, beta, ident="solution", tol=1e-8):
    """``sup_{[0, sigma_bar]} ||u||^2_{H^1_{1/2,w}}`` against the weighted data bound."""
    wc, w, sigma, tau = consts.weights, consts.omega, consts.sigma, consts.tau
    if beta < sigma + tau:
        raise ValueError(f"beta = {beta} is below sigma + tau = {sigma + tau}")
    sel = _times_in(sol, 0.0, consts.sigma_bar)
    # all norms relative to 2 log_scale
    ls2 = 2 * sol.log_scale
    log_lhs = max(log_sq_osgood(sol.snapshot(j), 0.5, w, 1, relative=True) for j in sel)
    u0 = sol.snapshot_at(0.0)
    if np.all(np.isneginf(u0.log_amp.real)):
        return _log_item("integral", ident, -math.inf, -math.inf, consts, tol)
    z = tau / beta
    data = (float(wc.log_phi_prime(z)) + (2 * beta * math.exp(float(wc.log_neg_phi(z))) + ls2)
            + log_sq_osgood(u0, 1.0, w, 0, relative=True))
    tail = log_sq_sobolev(sol.snapshot_at(sigma), 1, relative=True)
    damp = sigma * math.exp(float(wc.log_phi_prime((sigma + tau) / beta)))
    log_rhs = consts.log_C - damp + float(np.logaddexp(data, tail))
    return _log_item("integral", ident, log_lhs, log_rhs, consts, tol, ls2)


def log_g_hat(consts, log_y):
    """``log ghat(y)`` with ``ghat(y) = phi'((sigma+tau)/tau * h^{-1}(1/y))``."""
    _admissible(consts, log_y, "scaled data")
    wc = consts.weights
    z = wc.h_inv(consts.tau, log_y=-log_y)
    x = (consts.sigma + consts.tau) / consts.tau * z
    return float(wc.log_phi_prime(min(x, 1.0)))


def local_bound(consts, log_y_gevrey, log_u_sigma_H1_sq, log_C_tilde):
    """``log[C exp(-sigma g(y)) (1 + ||u(sigma)||^2_{H^1})]`` with ``g(y) = ghat(C~ y)``.

    ``log_y_gevrey`` is ``log ||u(0)||^2_{H^0_{nu,eps}}`` and
    ``log_C_tilde`` the log embedding constant; pass ``-inf`` for a vanishing
    ``u(sigma)``.
    """
    lg = log_g_hat(consts, log_C_tilde + log_y_gevrey)
    g = math.exp(lg) if lg < _LOG_MAX else math.inf
    return consts.log_C - consts.sigma * g + float(np.logaddexp(0.0, log_u_sigma_H1_sq))


def local_estimate_check(sol, consts, nu, eps, ident="solution", tol=1e-8):
    """``sup_{[0, sigma_bar]} ||u||^2_{H^1}`` against :func:`local_bound`."""
    sel = _times_in(sol, 0.0, consts.sigma_bar)
    log_lhs = max(log_sq_sobolev(sol.snapshot(j), 1, relative=True) for j in sel)
    u0 = sol.snapshot_at(0.0)
    ly = log_sq_gevrey(u0, nu, eps, 0)
    if np.isneginf(ly):
        return _log_item("local", ident, -math.inf, -math.inf, consts, tol)
    ct = embedding_constant(consts.omega, nu, eps, sol.grid).log_value
    tail = log_sq_sobolev(sol.snapshot_at(consts.sigma), 1)
    log_rhs = local_bound(consts, ly, tail, ct)
    return _log_item("local", ident, log_lhs + 2 * sol.log_scale, log_rhs, consts, tol)


# -- global bound ----------------------------------------------------------

def interval_schedule(alpha1, T2, T1, max_steps=10_000):
    """``T_0 = 0``, ``T_{i+1} = T_i + min(1/alpha1, T'' - T_i)/16`` until ``T_i > T'``.

    Returns the list ``[T_0, ..., T_last]``; raises when ``max_steps`` is hit,
    which signals ``T' >= T''``.
    """
    Ts = [0.0]
    while Ts[-1] <= T1:
        if len(Ts) > max_steps:
            raise RuntimeError("T_i iteration did not pass T' within the step guard")
        Ti = Ts[-1]
        Ts.append(Ti + min(1.0 / alpha1, T2 - Ti) / 16)
    return Ts


@dataclass
class GlobalBound:
    log_value: float
    iterations: int
    T_last: float
    trace: list

    @property
    def value(self):
        return math.exp(self.log_value) if self.log_value < _LOG_MAX else math.inf


def global_bound_G(spec, T1, D, log_y, grid, nu=1.0, eps=2.0, max_steps=10_000, xi_max=None,
                   C0=None, C1=None, log_D=None):
    """Compose the local bounds along ``T_{i+1} = T_i + min(1/alpha1, T'' - T_i)/16``.

    Step ``i`` maps ``y_i`` to ``(1 + D^2) C' C exp(-sigma_i g_i(C'' y_i))``; the
    returned value is the largest ``y_{i+1}``.  ``C'`` and ``C''`` are sups
    over ``grid`` of the mode factors from smoothing and from shifting the
    data by ``sigma_bar/2``.  Pass ``log_D`` instead of ``D`` for a priori
    bounds below double range.
    """
    T = spec.T
    if not (0 < T1 < T):
        raise ValueError(f"T' must lie in (0, {T})")
    T2 = 0.5 * (T + T1)
    if C0 is None or C1 is None:
        mc = mollification_constants(spec)
        C0, C1 = mc.C0, mc.C1
    xi_max = float(grid.abs_xi.max()) if xi_max is None else xi_max
    xi_max = max(xi_max, 1.0)
    ag0 = find_alpha1_gamma1(spec, xi_max=xi_max, C0=C0, C1=C1)
    r = grid.abs_xi
    rate = 2 * spec.kA * r ** 2 - 2 * spec.n * spec.kB * r - 2 * spec.kC
    ct = embedding_constant(spec.omega, nu, eps, grid).log_value
    if log_D is None:
        log_D = math.log(D) if D > 0 else -math.inf
    log_D = float(np.logaddexp(0.0, 2 * log_D))
    Ts = interval_schedule(ag0.alpha1, T2, T1, max_steps)
    y, best = log_y, -math.inf
    trace = []
    for i, Ti in enumerate(Ts[:-1]):
        c = select_constants(spec, T2 - Ti, horizon=T - Ti, xi_max=xi_max, C0=C0, C1=C1)
        log_Cp = float(np.max(np.log1p(r ** 2) - (c.sigma / 16) * rate))
        log_Cpp = float(np.max(2 * nu * r ** (1.0 / eps) - (c.sigma_bar / 2) * rate))
        try:
            lg = log_g_hat(c, ct + log_Cpp + y)
        except AdmissibilityError as exc:
            raise AdmissibilityError(f"step {i}: {exc.threshold}", exc.value, exc.limit,
                                     f"T_i = {Ti:.6g}") from None
        g = math.exp(lg) if lg < _LOG_MAX else math.inf
        y = log_D + log_Cp + c.log_C - c.sigma * g
        best = max(best, y)
        trace.append((Ti, c.sigma, y))
    Ti = Ts[-1]
    return GlobalBound(best, len(trace), Ti, trace)


def sandwich_check(sol, T1, D=None, nu=1.0, eps=2.0, ident="solution", tol=1e-8, log_D=None, **kw):
    """Measured ``sup_{[0, T']} ||u||^2_{L^2}`` against ``G(||u(0)||^2_{L^2})``.

    The a priori bound is ``D`` or, in log form, ``log_D``.
    """
    spec = sol.spec
    if log_D is None:
        if D is None or not D > 0:
            raise ValueError("sandwich_check needs D > 0 or log_D")
        log_D = math.log(D)
    ls2 = 2 * sol.log_scale
    logs = np.array([log_sq_sobolev(sol.snapshot(j), 0, relative=True) for j in range(len(sol.times))])
    if np.any(logs + ls2 > 2 * log_D + 1e-12 * max(1.0, abs(log_D))):
        raise AdmissibilityError("log ||u(t)||_{L^2} <= log D", 0.5 * float(logs.max() + ls2), log_D)
    sel = _times_in(sol, 0.0, T1)
    log_lhs = float(logs[sel].max())
    ly = log_sq_sobolev(sol.snapshot_at(0.0), 0)
    if np.isneginf(ly):
        return _log_item("global", ident, -math.inf, -math.inf, None, tol)
    G = global_bound_G(spec, T1, None, ly, sol.grid, nu, eps, log_D=log_D, **kw)
    rep = _log_item("global", ident, log_lhs + ls2, G.log_value, None, tol)
    rep.notes.append(f"iterations={G.iterations};T_last={G.T_last:.6g}")
    return rep


# -- the explicit modulus --------------------------------------------------

def sec4_log_rho_bound(consts):
    """Lower bound for ``-log rho^2 = 2 tau |Lambda((sigma+tau)/tau)|`` in log form.

    Returns ``log(2 tau |Lambda|)`` when it is representable, otherwise a
    certified lower bound from ``int_{1/z}^1 psi >= (y* - 1/z) psi(y*)``.
    """
    tau, sigma, q = consts.tau, consts.sigma, consts.q
    zeta = (sigma + tau) / tau
    p = consts.lam * q
    wc = consts.weights
    try:
        return math.log(2 * tau) + float(wc.log_abs_Lambda(zeta)), True
    except (WeightOverflow, ArithmeticError):
        pass
    # psi = exp(e^{y^{-p}} - 1); choose y* with log psi(y*) = 700
    y_star = math.log(701.0) ** (-1.0 / p)
    lo = 1.0 / zeta
    if y_star <= lo:
        y_star = min(1.0, 2 * lo)
        lpsi = math.expm1(y_star ** (-p))
    else:
        lpsi = 700.0
    return math.log(2 * tau) + math.log(zeta * q * (y_star - lo)) + lpsi, False


@dataclass
class Sec4Bound:
    bound: float
    two_interval: float
    iterated: float
    sigma_tilde: float
    tau_tilde: float
    delta_tilde: float
    intervals: int
    admissible: bool
    failed: list
    exponent_excess: float = 0.0


def _sec4_value(sigma, kA, tau, delta, L):
    return math.exp(-(sigma * kA / (2 * math.e)) * math.exp(math.log(L / (2 * tau)) ** delta))


def explicit_bound_sec4(consts, log_u0_sq, check_admissibility=True, T1=None):
    """Closed-form bound for ``sup_{[0, sigma_bar_1]} ||u||^2_{L^2}`` and its iterates.

    ``bound`` uses ``(sigma_1, tau_1, delta_1)``; ``two_interval`` uses
    ``sigma_2`` and the exponent ``delta_1 delta_2``; ``iterated`` continues the
    ``T_i`` recursion until ``T_i > T'`` (``T' = 2T'' - T`` by default).

    With ``delta_1`` of order ``1e-35`` the factor ``log(L/(2 tau))^{delta_1}``
    rounds to one, so ``bound`` is flat in double precision;
    ``exponent_excess = log(L/(2 tau))^{delta_1} - 1`` keeps the dependence
    on ``u0`` visible (it decreases strictly as ``u0`` grows).
    """
    failed = []
    L = abs(log_u0_sq)
    if not log_u0_sq < 0:
        failed.append(("||u(0)|| < 1", log_u0_sq, 0.0))
    if not L > 2 * consts.tau:
        failed.append(("|log ||u(0)||^2| > 2 tau", L, 2 * consts.tau))
    lrho, exact = sec4_log_rho_bound(consts)
    # log u0^2 < log rho^2 = -2 tau |Lambda|  <=>  log L > log(2 tau |Lambda|)
    if not math.log(max(L, 1e-300)) > lrho:
        failed.append(("||u(0)|| < rho" if exact else "||u(0)|| < rho (lower bound)", math.log(max(L, 1e-300)), lrho))
    if failed and check_admissibility:
        name, v, lim = failed[0]
        raise AdmissibilityError(name, v, lim, "log scale")
    if L <= 2 * consts.tau:
        raise AdmissibilityError("|log ||u(0)||^2| > 2 tau", L, 2 * consts.tau)
    s1, t1, d1, kA = consts.sigma, consts.tau, consts.delta1, consts.kA
    b1 = _sec4_value(s1, kA, t1, d1, L)
    # interval recursion: sigma_i = min(1/alpha1, T'' - T_i), T_{i+1} = T_i + sigma_i/16
    T2 = consts.T2
    T1 = 2 * T2 - consts.T if T1 is None else T1
    sig, Ti, delta, k = [], 0.0, 1.0, 0
    while True:
        si = min(1.0 / consts.alpha1, T2 - Ti)
        ti = min(si / 4, si * kA / (4 * math.e))
        delta *= ((si + ti) / ti) ** (-consts.lam * kA)
        sig.append(si)
        Ti += si / 16
        k += 1
        if Ti > T1 or k >= 10_000:
            break
    if len(sig) < 2:
        s2 = min(1.0 / consts.alpha1, T2 - s1 / 16)
        t2 = min(s2 / 4, s2 * kA / (4 * math.e))
        d12 = d1 * ((s2 + t2) / t2) ** (-consts.lam * kA)
    else:
        s2 = sig[1]
        t2 = min(s2 / 4, s2 * kA / (4 * math.e))
        d12 = d1 * ((s2 + t2) / t2) ** (-consts.lam * kA)
    b2 = _sec4_value(s2, kA, t1, d12, L)
    b_it = _sec4_value(sig[-1], kA, t1, delta, L)
    excess = math.expm1(d1 * math.log(math.log(L / (2 * t1))))
    return Sec4Bound(b1, b2, b_it, sig[-1] * kA / (2 * math.e), t1, delta, k, not failed, failed,
                     excess)


def appendix_ratio(w, zeta):
    """``psi(1/zeta) / |Lambda(zeta)|``; raises past the largest representable ``zeta``."""
    try:
        return w.appendix_ratio(zeta)
    except (WeightOverflow, ArithmeticError) as exc:
        raise WeightOverflow(f"appendix ratio beyond zeta = {1.0 / w.phi_floor:.6g}: {exc}",
                             threshold=1.0 / w.phi_floor) from None


# -- diagnostics -----------------------------------------------------------

def _safe_exp(x):
    return math.exp(x) if x < _LOG_MAX else math.inf


def regime_probe(sols, delta, M, N, G=None, T1=None):
    """Rows of Hoelder, logarithmic and Osgood-type stability ratios per solution.

    ``G`` maps ``log ||u(0)||^2`` to ``log G``; the Osgood column is ``nan``
    when it is absent or raises.
    """
    rows = []
    for k, sol in enumerate(sols):
        T1_ = sol.spec.T if T1 is None else T1
        sel = np.flatnonzero(sol.times <= T1_ + 1e-14)
        ls = sol.log_scale
        logs = np.array([log_sq_sobolev(sol.snapshot(j), 0, relative=True) for j in sel])
        sup2 = float(logs.max())
        l0 = log_sq_sobolev(sol.snapshot_at(0.0), 0, relative=True)
        if np.isneginf(sup2):
            rows.append({"solution": k, "hoelder": 0.0, "log": 0.0, "osgood": 0.0})
            continue
        ln0 = 0.5 * l0 + ls
        hold = _safe_exp(0.5 * sup2 - 0.5 * delta * l0 + (1 - delta) * ls)
        logr = _safe_exp(0.5 * sup2 + ls - math.log(M) + N * abs(ln0) ** delta)
        osg = math.nan
        if G is not None:
            try:
                osg = _safe_exp(sup2 + 2 * ls - G(l0 + 2 * ls))
            except (AdmissibilityError, WeightOverflow, ArithmeticError):
                osg = math.nan
        rows.append({"solution": k, "hoelder": hold, "log": logr, "osgood": osg})
    return rows
