"""Weight calculus built on an Osgood modulus.

For a modulus ``w`` and parameters ``lam, q > 0``::

    theta(rho)   = int_{1/rho}^{s_max} ds / w(s)
    psi(y)       = theta^{-1}(-lam q log y)
    phi(y)       = q int_1^y psi(z) dz
    h(z)         = exp(-2 tau phi(z) / z) phi'(z)
    Lambda(y)    = y phi(1/y)

These functions grow extremely fast (``psi`` is doubly exponential in
``1/y`` for the LogLog-type moduli), so the calculus is carried out on
logarithms: ``log psi`` is obtained by inverting a tabulated ``theta`` in
the variable ``u = log rho``, and ``-phi`` is tabulated as ``log Phi(w)``
with ``w = log(1/y)``.  Plain-valued accessors raise :class:`WeightOverflow`
when the value is not representable in double precision.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate
from scipy.special import logsumexp

from .modulus import Modulus, QuadratureError, check_modulus_axioms

__all__ = [
    "WeightCalculus",
    "WeightOverflow",
    "WeightDomainError",
    "closed_form_psi_sec4",
    "closed_form_log_psi_sec4",
    "closed_form_theta_sec4",
]

_GL_X, _GL_W = leggauss(16)
_LOG_MAX = math.log(np.finfo(float).max)
_U_CAP = 1e300
Y_FLOOR = 1e-9


class WeightOverflow(OverflowError):
    """A weight is not representable; ``threshold`` names the limit reached."""

    def __init__(self, message, threshold=None):
        super().__init__(message)
        self.threshold = threshold


class WeightDomainError(ValueError):
    pass


def _gl_panel(f, a, b):
    """16-point Gauss-Legendre on each of the paired panels ``[a_i, b_i]``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[..., None] + half[..., None] * _GL_X
    return half * np.sum(_GL_W * f(x), axis=-1)


def _gl_log_panel(logf, a, b):
    """``log int_a^b exp(logf)`` per panel, by Gauss-Legendre in log space."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[..., None] + half[..., None] * _GL_X
    lf = logf(x)
    with np.errstate(divide="ignore"):
        return np.log(half) + logsumexp(lf, b=_GL_W, axis=-1)


class WeightCalculus:
    """Tabulated, invertible ``theta, psi, phi, h, Lambda`` for ``(modulus, lam, q)``.

    Tables are populated lazily on first use and then only read.
    """

    def __init__(self, modulus: Modulus, lam: float, q: float, eta_step=1.0 / 32,
                 w_step=1.0 / 16, max_nodes=50_000, y_floor=Y_FLOOR):
        if not (lam > 0 and q > 0):
            raise WeightDomainError("lam and q must be positive")
        if modulus.kind == "custom" and not check_modulus_axioms(modulus).ok:
            raise WeightDomainError(f"{modulus.name} is not a modulus of continuity")
        self.m = modulus
        self.lam = float(lam)
        self.q = float(q)
        self.p = self.lam * self.q
        self.u0 = modulus.v_min
        self.eta_step = eta_step
        self.w_step = w_step
        self.max_nodes = max_nodes
        self.y_floor = y_floor
        self._eta = np.zeros(1)
        self._th = np.zeros(1)

    def __repr__(self):
        return f"WeightCalculus({self.m.name}, lam={self.lam:g}, q={self.q:g})"

    # -- theta -------------------------------------------------------------
    @property
    def rho_min(self):
        """``theta^{-1}(0) = 1/s_max``, the left end of the ``theta`` domain."""
        return 1.0 / self.m.s_max

    def theta(self, rho, rtol=1e-12):
        """Quadrature value of ``int_{1/rho}^{s_max} ds/w(s)``; zero at ``rho_min``."""
        rho = float(rho)
        if rho < self.rho_min * (1 - 1e-15):
            raise WeightDomainError(f"theta needs rho >= {self.rho_min}")
        return self.theta_log(math.log(max(rho, self.rho_min)), rtol)

    def theta_log(self, u, rtol=1e-12):
        """``theta(e^u)``; accepts ``u`` far beyond the float range of ``rho``."""
        if u <= self.u0:
            return 0.0
        m = self.m
        # integrate in eta = log1p(v - u0) so that huge u stays cheap
        eta1 = math.log1p(u - self.u0)
        f = lambda eta: math.exp(eta) / float(m.log_ratio(self.u0 + math.expm1(eta)))
        val, err = integrate.quad(f, 0.0, eta1, epsabs=0.0, epsrel=rtol, limit=1000)
        if err > 1e3 * rtol * max(abs(val), 1e-300):
            raise QuadratureError(f"theta: achieved error {err:.3e}", achieved=err)
        return val

    def _theta_integrand(self, eta):
        with np.errstate(over="ignore"):
            return np.exp(eta) / self.m.log_ratio(self.u0 + np.expm1(eta))

    def _extend_theta_table(self, x_target=-np.inf, eta_target=-np.inf):
        eta, th = self._eta, self._th
        eta_cap = math.log(_U_CAP)
        while th[-1] < x_target or eta[-1] < min(eta_target, eta_cap):
            e_end = eta[-1]
            if e_end >= eta_cap or not np.isfinite(th[-1]):
                raise WeightOverflow(
                    f"theta^-1({x_target:.6g}) exceeds log(rho) = {_U_CAP:.1e}",
                    threshold=float(th[-1]))
            # geometric bracket expansion of the tabulated range
            new_end = min(max(2.0 * e_end, e_end + 4.0), eta_cap)
            nodes = np.arange(e_end, new_end + 0.5 * self.eta_step, self.eta_step)[1:]
            nodes = np.minimum(nodes, eta_cap)
            a = np.concatenate(([e_end], nodes[:-1]))
            inc = _gl_panel(self._theta_integrand, a, nodes)
            eta = np.concatenate((eta, nodes))
            th = np.concatenate((th, th[-1] + np.cumsum(inc)))
        self._eta, self._th = eta, th

    def log_theta_inv(self, x):
        """``log theta^{-1}(x)`` by table lookup and bisection within a panel."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise WeightDomainError("theta_inv needs x >= 0")
        self._extend_theta_table(x_target=float(np.max(x)) if x.size else 0.0)
        eta, th = self._eta, self._th
        k = np.clip(np.searchsorted(th, x, side="right") - 1, 0, eta.size - 2)
        lo = eta[k].copy()
        hi = eta[k + 1].copy()
        base = th[k]
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            val = base + _gl_panel(self._theta_integrand, eta[k], mid)
            below = val < x
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out = self.u0 + np.expm1(0.5 * (lo + hi))
        out = np.where(x == 0, self.u0, out)
        return float(out) if out.ndim == 0 else out

    def theta_inv(self, x):
        u = self.log_theta_inv(x)
        if np.max(u) > _LOG_MAX:
            raise WeightOverflow("theta_inv value exceeds double range", threshold=_LOG_MAX)
        return np.exp(u)

    # -- psi ---------------------------------------------------------------
    def _check_y(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(~(y > 0)) or np.any(y > 1):
            raise WeightDomainError("argument must lie in (0, 1]")
        return y

    def log_psi(self, y):
        y = self._check_y(y)
        return self.log_theta_inv(-self.p * np.log(y))

    def psi(self, y):
        lp = self.log_psi(y)
        if np.max(lp) > _LOG_MAX:
            raise WeightOverflow("psi not representable", threshold=self._y_of_log_value(_LOG_MAX))
        return np.exp(lp)

    def _y_of_log_value(self, logval):
        # largest y at which log psi reaches logval
        try:
            x = float(self.theta_log(logval)) if logval > self.u0 else 0.0
        except QuadratureError:
            return float("nan")
        return math.exp(-x / self.p)

    def phi_prime(self, y):
        return self.q * self.psi(y)

    def log_phi_prime(self, y):
        return math.log(self.q) + self.log_psi(y)

    # -- phi ---------------------------------------------------------------
    # -phi(y)/q = Phi(w) = int_0^w psi(e^-s) e^-s ds with w = log(1/y).  With
    # u = log psi as integration variable, s = theta~(u)/p and
    # ds = du / (p r(u)), so no inversion of theta is needed inside panels.
    def _theta_fwd(self, u):
        """Tabulated ``theta(e^u)`` evaluated forward (vectorized)."""
        u = np.asarray(u, dtype=float)
        eta = np.log1p(np.maximum(u - self.u0, 0.0))
        self._extend_theta_table(eta_target=float(np.max(eta)) if eta.size else 0.0)
        E, th = self._eta, self._th
        k = np.clip(np.searchsorted(E, eta, side="right") - 1, 0, E.size - 2)
        return th[k] + _gl_panel(self._theta_integrand, E[k], np.maximum(eta, E[k]))

    def _log_f(self, u):
        # log of the Phi integrand in the u variable
        with np.errstate(divide="ignore"):
            return (u - self._theta_fwd(u) / self.p - math.log(self.p)
                    - np.log(self.m.log_ratio(u)))

    def _u_step(self, u):
        pr = self.p * float(self.m.log_ratio(u))
        slope = abs(1.0 - 1.0 / pr) + 1.0 / max(u - self.u0 + 1.0, 1.0)
        return min(2.0 / slope, self.w_step * pr)

    def _dlog_f(self, u):
        """``d/du`` of ``log f``: ``1 - 1/(p r(u)) - r'(u)/r(u)``."""
        u = np.asarray(u, dtype=float)
        d = 1e-6 * np.maximum(1.0, np.abs(u))
        lr = np.log(self.m.log_ratio(u + d)) - np.log(self.m.log_ratio(u - d))
        return 1.0 - 1.0 / (self.p * self.m.log_ratio(u)) - lr / (2 * d)

    @cached_property
    def _phi_table(self):
        """Cumulative ``log Phi`` on ``u`` nodes from ``u0`` to the switch point.

        Tabulation stops once the integrand is increasing with log-slope
        above 1/4 (its slope only grows from there for the built-in
        moduli); larger ``U`` are handled by :meth:`_log_Phi_far`.
        """
        w_max = -math.log(self.y_floor)
        u_end = float(self._U_of_w(w_max)) if w_max * self.p < self._theta_cap() else _U_CAP
        nodes = [self.u0]
        u = self.u0
        while u < u_end and len(nodes) < self.max_nodes:
            if u - self.u0 > 64 and float(self._dlog_f(u)) > 0.25:
                break
            u = min(u + self._u_step(u), u_end)
            nodes.append(u)
        nodes = np.asarray(nodes)
        with np.errstate(over="ignore", invalid="ignore"):
            pan = _gl_log_panel(self._log_f, nodes[:-1], nodes[1:])
        good = np.isfinite(pan)
        if not good.all():
            cut = int(np.argmax(~good))
            nodes, pan = nodes[:cut + 1], pan[:cut]
        logcum = np.concatenate(([-np.inf], np.logaddexp.accumulate(pan)))
        far_ok = bool(nodes[-1] < u_end and float(self._dlog_f(nodes[-1])) > 0)
        return nodes, logcum, far_ok

    def _theta_cap(self):
        try:
            self._extend_theta_table(eta_target=math.log(_U_CAP))
        except WeightOverflow:
            pass
        return float(self._th[-1])

    @property
    def phi_floor(self):
        """Smallest ``y`` at which ``phi`` can be evaluated."""
        nodes, _, far_ok = self._phi_table
        if far_ok:
            return max(self.y_floor, math.exp(-self._theta_cap() / self.p))
        return math.exp(-float(self._theta_fwd(nodes[-1])) / self.p)

    def _U_of_w(self, w):
        return self.log_theta_inv(self.p * np.asarray(w, dtype=float))

    def _log_Phi_far(self, U, u_t, log_t):
        """``log Phi(U)`` for ``U`` beyond the table end ``u_t`` (integrand increasing there)."""
        U = np.asarray(U, dtype=float)
        out = np.empty(U.shape)
        s_t = float(self._dlog_f(u_t))
        big = U > 1e8
        if np.any(big):
            # Laplace: int^U e^{g} = e^{g(U)}/g'(U) (1 + O(g''/g'^2)), g'' = O(U^-2) here
            Ub = U[big]
            out[big] = np.logaddexp(log_t, self._log_f(Ub) - np.log(self._dlog_f(Ub)))
        small = ~big
        if np.any(small):
            Us = U[small]
            L = (45.0 + np.log1p(Us - u_t)) / s_t
            a = np.maximum(Us - L, u_t)
            frac = np.linspace(0.0, 1.0, 65)
            win = np.empty(Us.shape)
            # chunks keep the (points x panels x nodes) work arrays small
            for k in range(0, Us.size, 8):
                sl = slice(k, k + 8)
                edges = a[sl, None] + (Us[sl] - a[sl])[:, None] * frac
                win[sl] = logsumexp(_gl_log_panel(self._log_f, edges[:, :-1], edges[:, 1:]), axis=1)
            # f increasing on [u_t, a]: the skipped part is at most (a - u_t) f(a)
            with np.errstate(divide="ignore"):
                skipped = np.where(a > u_t, self._log_f(a) + np.log(a - u_t), -np.inf)
            if np.any(skipped > win - 37.0):
                raise QuadratureError("phi window too short for the integrand", achieved=float(np.max(skipped - win)))
            out[small] = np.logaddexp(log_t, win)
        return out

    def _log_Phi_u(self, U):
        nodes, logcum, far_ok = self._phi_table
        U = np.asarray(U, dtype=float)
        beyond = U > nodes[-1] * (1 + 1e-14) + 1e-300
        if np.any(beyond) and not far_ok:
            raise QuadratureError(
                f"phi table ends at y = {self.phi_floor:.3e} (integrand too steep)",
                achieved=self.phi_floor)
        Ui = np.where(beyond, nodes[-1], U)
        k = np.clip(np.searchsorted(nodes, Ui, side="right") - 1, 0, nodes.size - 2)
        with np.errstate(divide="ignore"):
            part = _gl_log_panel(self._log_f, nodes[k], np.maximum(Ui, nodes[k]))
        part = np.where(Ui > nodes[k], part, -np.inf)
        out = np.logaddexp(logcum[k], part)
        if np.any(beyond):
            out = np.array(out, dtype=float, ndmin=1)
            b = np.atleast_1d(beyond)
            out[b] = self._log_Phi_far(np.atleast_1d(U)[b], float(nodes[-1]), float(logcum[-1]))
            out = out.reshape(U.shape)
        return out

    def log_neg_phi(self, y):
        """``log(-phi(y))``; ``-inf`` at ``y = 1``."""
        y = self._check_y(y)
        out = math.log(self.q) + self._log_Phi_u(self.log_psi(y))
        return float(out) if out.ndim == 0 else out

    def phi(self, y):
        """``q int_1^y psi``; non-positive, raises :class:`WeightOverflow` if too large."""
        lnp = self.log_neg_phi(y)
        if np.max(lnp) > _LOG_MAX:
            raise WeightOverflow("phi not representable", threshold=float(np.max(lnp)))
        return -np.exp(lnp)

    def log_phi_increment(self, a, b):
        """``log(phi(b) - phi(a))`` for ``0 < a <= b <= 1`` without cancellation."""
        a = self._check_y(a)
        b = self._check_y(b)
        a, b = np.broadcast_arrays(a, b)
        ua, ub = self.log_psi(a), self.log_psi(b)
        ua, ub = np.atleast_1d(ua), np.atleast_1d(ub)
        out = np.full(ua.shape, -np.inf)
        pos = ua > ub
        pr = self.p * self.m.log_ratio(ub)
        change = (ua - ub) * np.maximum(1.0, 1.0 / pr)
        close = pos & (change < 8.0)
        if np.any(close):
            lo, hi = ub[close], ua[close]
            edges = lo[:, None] + (hi - lo)[:, None] * np.linspace(0, 1, 9)
            parts = _gl_log_panel(self._log_f, edges[:, :-1], edges[:, 1:])
            out[close] = logsumexp(parts, axis=1)
        far = pos & ~close
        if np.any(far):
            A = self._log_Phi_u(ua[far])
            B = self._log_Phi_u(ub[far])
            out[far] = A + np.log(-np.expm1(B - A))
        out = out + math.log(self.q)
        return float(out[0]) if np.ndim(a) == 0 else out.reshape(np.shape(a))

    def phi_second_fd(self, y, rel_step=1e-4):
        """Central difference of ``phi_prime``."""
        y = np.asarray(y, dtype=float)
        d = rel_step * y
        return (self.phi_prime(y + d) - self.phi_prime(y - d)) / (2 * d)

    def phi_ode_rhs(self, y):
        """``-lam phi'(y)^2 w(q/phi'(y))``, the right side of the ``phi`` equation."""
        lp = self.log_psi(y)
        # lam (q psi)^2 w(1/psi) = lam q^2 psi r(log psi)
        return -self.lam * self.q ** 2 * np.exp(lp) * self.m.log_ratio(lp)

    def check_phi_ode(self, grid, rel_step=1e-4):
        """Max relative residual of ``y phi'' = -lam phi'^2 w(q/phi')`` on ``grid``.

        Dividing both sides by ``q psi`` turns the equation into
        ``d log psi / d log y = -lam q r(log psi)``, which is checked with a
        central difference in ``log y``; this form stays finite where
        ``psi`` itself overflows.
        """
        y = np.atleast_1d(np.asarray(grid, dtype=float))
        t = np.log(y)
        u = self.log_psi(y)
        rhs = -self.lam * self.q * self.m.log_ratio(u)
        # shrink the step where log psi varies on a short log y scale
        d = rel_step / (1.0 + np.abs(rhs) / np.maximum(np.abs(u), 1.0))
        hi = np.minimum(t + d, 0.0)
        lo = t - d
        du = (self.log_psi(np.exp(hi)) - self.log_psi(np.exp(lo))) / (hi - lo)
        return float(np.max(np.abs(du / rhs - 1.0)))

    # -- h -----------------------------------------------------------------
    def _check_z(self, z):
        z = np.asarray(z, dtype=float)
        if np.any(~(z > 0)) or np.any(z >= 1):
            raise WeightDomainError("h is defined on (0, 1)")
        return z

    def log_h(self, tau, z):
        """``log h(z) = -2 tau phi(z)/z + log phi'(z)``."""
        z = self._check_z(z)
        lnp = self.log_neg_phi(z)
        if np.max(lnp) > _LOG_MAX - math.log(2 * tau + 1):
            raise WeightOverflow("h exponent -2 tau phi/z not representable",
                                 threshold=float(np.max(lnp)))
        return 2 * tau * np.exp(lnp) / z + math.log(self.q) + self.log_psi(z)

    def h_weight(self, tau, z):
        lh = self.log_h(tau, z)
        if np.max(lh) > _LOG_MAX:
            raise WeightOverflow("h not representable", threshold=float(np.max(lh)))
        return np.exp(lh)

    def h_inv(self, tau, y=None, log_y=None, rtol=1e-6):
        """Solve ``h(z) = y`` for ``z`` in ``(0, 1)`` by bisection in ``log(1/z)``.

        Pass ``log_y`` instead of ``y`` when ``y`` is beyond double range.
        """
        if log_y is None:
            if y is None or not y > self.q:
                raise WeightDomainError(f"h_inv needs y > q = {self.q}")
            log_y = math.log(y)
        elif not log_y > math.log(self.q):
            raise WeightDomainError(f"h_inv needs y > q = {self.q}")
        # h(1^-) = q; bracket the root from the left by doubling log(1/z)
        w_hi = 1.0
        w_top = -math.log(self.phi_floor)
        while float(self.log_h(tau, math.exp(-w_hi))) < log_y:
            if w_hi >= w_top:
                raise WeightOverflow(f"h_inv: target beyond table floor y={self.phi_floor:.3e}",
                                     threshold=self.phi_floor)
            w_hi = min(2 * w_hi, w_top)
        w_lo = 0.0
        for _ in range(200):
            w_mid = 0.5 * (w_lo + w_hi)
            if w_mid in (w_lo, w_hi):
                break
            if float(self.log_h(tau, math.exp(-w_mid))) < log_y:
                w_lo = w_mid
            else:
                w_hi = w_mid
            if w_hi - w_lo < 1e-17 * max(w_hi, 1e-300):
                break
        return math.exp(-0.5 * (w_lo + w_hi))

    # -- Lambda ------------------------------------------------------------
    def Lambda(self, y):
        """``y phi(1/y)`` for ``y >= 1``."""
        y = np.asarray(y, dtype=float)
        if np.any(y < 1):
            raise WeightDomainError("Lambda needs y >= 1")
        return y * self.phi(1.0 / y)

    def log_abs_Lambda(self, y):
        y = np.asarray(y, dtype=float)
        if np.any(y < 1):
            raise WeightDomainError("Lambda needs y >= 1")
        return np.log(y) + self.log_neg_phi(1.0 / y)

    def Lambda_inv(self, x, rtol=1e-12):
        """Inverse of the decreasing map ``Lambda: [1, inf) -> (-inf, 0]``."""
        x = float(x)
        if x > 0:
            raise WeightDomainError("Lambda_inv needs x <= 0")
        if x == 0:
            return 1.0
        target = math.log(-x)
        lo, hi = 0.0, 1.0
        top = -math.log(self.phi_floor)
        while float(self.log_abs_Lambda(math.exp(hi))) < target:
            if hi >= top:
                raise WeightOverflow("Lambda_inv: target beyond table floor", threshold=top)
            lo, hi = hi, min(2 * hi, top)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if float(self.log_abs_Lambda(math.exp(mid))) < target:
                lo = mid
            else:
                hi = mid
        return math.exp(0.5 * (lo + hi))

    # -- Appendix ratio ----------------------------------------------------
    def log_appendix_ratio(self, zeta):
        """``log(psi(1/zeta) / |Lambda(zeta)|)`` for ``zeta >= 2``."""
        zeta = np.asarray(zeta, dtype=float)
        if np.any(zeta < 2):
            raise WeightDomainError("appendix ratio needs zeta >= 2")
        return self.log_psi(1.0 / zeta) - self.log_abs_Lambda(zeta)

    def appendix_ratio(self, zeta):
        lr = self.log_appendix_ratio(zeta)
        if np.max(lr) > _LOG_MAX:
            raise WeightOverflow("appendix ratio not representable", threshold=float(np.max(lr)))
        return np.exp(lr)


# -- closed forms for the explicit modulus s(1-log s)log(1-log s) ----------

def closed_form_theta_sec4(rho):
    return math.log(math.log(1.0 + math.log(rho)))


def closed_form_log_psi_sec4(lam, q, y):
    """``log psi = e^{y^{-lam q}} - 1``; raises once that exceeds double range."""
    y = np.asarray(y, dtype=float)
    e = y ** (-lam * q)
    if np.max(e) > _LOG_MAX:
        y_min = _LOG_MAX ** (-1.0 / (lam * q))
        raise WeightOverflow(f"closed-form log psi overflows below y = {y_min:.6g}", threshold=y_min)
    return np.expm1(e)


def closed_form_psi_sec4(lam, q, y):
    """``exp(e^{y^{-lam q}} - 1)`` with an overflow guard."""
    lp = closed_form_log_psi_sec4(lam, q, y)
    if np.max(lp) > _LOG_MAX:
        y_min = math.log1p(_LOG_MAX) ** (-1.0 / (lam * q))
        raise WeightOverflow(f"closed-form psi overflows below y = {y_min:.6g}", threshold=y_min)
    return np.exp(lp)
