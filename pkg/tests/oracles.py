"""Independent reference values used by the test-suite.

Each oracle re-derives a quantity from its closed form or by brute-force
quadrature, without going through the package code paths it checks.
Run this file directly to print the pinned values.
"""

import math

import mpmath as mp
import numpy as np
from scipy import integrate


def sec4_bound(sigma, kA, tau, delta, log_u0_sq, dps=60):
    """``exp(-(sigma kA/(2e)) exp(log(|log u0^2|/(2 tau))^delta))`` at ``dps`` digits."""
    with mp.workdps(dps):
        L = abs(mp.mpf(log_u0_sq))
        inner = mp.log(L / (2 * mp.mpf(tau))) ** mp.mpf(delta)
        return float(mp.exp(-(mp.mpf(sigma) * kA / (2 * mp.e)) * mp.exp(inner)))


def sec4_exponent_excess(tau, delta, log_u0_sq, dps=80):
    """``log(|log u0^2|/(2 tau))^delta - 1`` at ``dps`` digits."""
    with mp.workdps(dps):
        L = abs(mp.mpf(log_u0_sq))
        return float(mp.log(L / (2 * mp.mpf(tau))) ** mp.mpf(delta) - 1)


def heat_h1_log_norm(s, xi_max):
    """``0.5 log int_{-X}^{X} (1 + xi^2) exp(-2 xi^2 s) dxi`` by adaptive quadrature.

    Flat unit terminal spectrum under the heat equation, evaluated at
    ``s = T - t``.
    """
    val, _ = integrate.quad(lambda x: (1 + x * x) * math.exp(-2 * x * x * s), 0.0, xi_max,
                            epsabs=0.0, epsrel=1e-13, limit=400)
    return 0.5 * math.log(2 * val)


def heat_smoothing_slope(xi_max, T=1.0, window=(1e-3, 1e-2), samples=40):
    """Least-squares slope of the oracle log ``H^1`` norm against ``-log s``."""
    s = np.geomspace(window[0] * T, window[1] * T, samples)
    ln = np.array([heat_h1_log_norm(x, xi_max) for x in s])
    return float(np.polyfit(-np.log(s), ln, 1)[0])


def sec4_appendix_log_ratio(lam, q, zeta, dps=30):
    """``log psi(1/zeta) - log |Lambda(zeta)|`` for the explicit modulus by direct quadrature.

    Uses ``log psi(y) = exp(y^{-lam q}) - 1`` and
    ``|Lambda(zeta)| = q zeta int_{1/zeta}^1 psi``.
    """
    p = lam * q
    with mp.workdps(dps):
        lpsi = lambda y: mp.expm1(mp.mpf(y) ** (-p))
        a = 1 / mp.mpf(zeta)
        integral = mp.quad(lambda y: mp.exp(lpsi(y)), [a, (1 + a) / 2, 1])
        return float(lpsi(a) - mp.log(q * zeta * integral))


if __name__ == "__main__":
    for k in (10, 8, 6, 4, 2):
        print(f"sec4 bound u0^2=1e-{k}:", sec4_bound(0.5, 1.0, 0.5 / (4 * math.e),
                                                     (1 + 4 * math.e) ** -32.0, -k * math.log(10)))
    print("heat slope, xi_max=8:", heat_smoothing_slope(8.0))
    print("heat slope, xi_max=64:", heat_smoothing_slope(64.0))
    print("appendix log ratio:", [sec4_appendix_log_ratio(0.15, 1.0, 10.0 ** k) for k in range(1, 7)])
