"""Weight calculus for a few Osgood moduli.

For the Lipschitz modulus every weight has a closed form, so the first block
shows the quadrature values next to them.  The second block turns to the
modulus ``s(1 - log s)log(1 - log s)``: ``psi(1)`` is known exactly, and the
ratio ``psi(1/zeta)/|Lambda(zeta)|`` keeps growing, unlike the Lipschitz
ratio which settles to a constant.

Run with ``python3 demos/weight_calculus.py``.
"""

import math

import numpy as np

from osgoodlab.modulus import Modulus
from osgoodlab.weights import WeightCalculus

lip = WeightCalculus(Modulus.lipschitz(), 2.0, 1.0)
y = np.array([0.05, 0.2, 0.5, 0.8, 0.95])

print("Lipschitz modulus, lambda = 2, q = 1")
print(f"{'y':>6} {'psi':>12} {'y^-2':>12} {'phi':>12} {'1 - 1/y':>12}")
for yk, p, f in zip(y, lip.psi(y), lip.phi(y)):
    print(f"{yk:6.2f} {p:12.6f} {yk ** -2:12.6f} {f:12.6f} {1 - 1 / yk:12.6f}")
print(f"Lambda(2) = {float(lip.Lambda(2.0)):.12f} (closed form -2)")

# the h weight grows very fast as z -> 0; its log stays readable
tau = 0.5
z = np.array([0.1, 0.3, 0.6, 0.9])
print("\nlog h(z) with tau = 0.5")
for zk, lh in zip(z, lip.log_h(tau, z)):
    print(f"  z = {zk:.1f}: {lh:10.5f} vs {2 * tau * (1 / zk - 1) / zk - 2 * math.log(zk):10.5f}")

sec4 = WeightCalculus(Modulus.sec4(), 1.0, 1.0)
print(f"\nsec4 modulus: psi(1) = {float(sec4.psi(1.0)):.15f}, e^(e-1) = {math.exp(math.e - 1):.15f}")

slow = WeightCalculus(Modulus.sec4(), 0.15, 1.0)
zeta = 10.0 ** np.arange(1, 7)
print("\nlog(psi(1/zeta)/|Lambda(zeta)|), lambda = 0.15")
for zk, r in zip(zeta, slow.log_appendix_ratio(zeta)):
    print(f"  zeta = {zk:8.0e}: {r:9.4f}")
fast = WeightCalculus(Modulus.lipschitz(), 2.0, 1.0)
print("Lipschitz, lambda = 2, for contrast (tends to log 1 = 0):")
print("  " + "  ".join(f"{r:.4f}" for r in fast.log_appendix_ratio(zeta)))
