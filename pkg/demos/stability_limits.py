"""Where the composed stability bound stops being computable.

``G`` chains local estimates along a schedule of intervals.  The script
prints the schedule for ``T' = 0.9``, then shows the admissibility limit
that each step imposes on its argument, and finally evaluates the explicit
bound for the modulus ``s(1 - log s)log(1 - log s)``, whose dependence on the
data survives only in the tiny exponent excess.

Run with ``python3 demos/stability_limits.py``.
"""

import math

from osgoodlab.config import load_config
from osgoodlab.estimator import (
    AdmissibilityError, explicit_bound_sec4, find_alpha1_gamma1, global_bound_G,
    interval_schedule, select_constants,
)
from osgoodlab.modulus import Modulus
from osgoodlab.operator import OperatorSpec

heat = OperatorSpec.constant(1, 1.0)
ag = find_alpha1_gamma1(heat, xi_max=8.0, C0=0.0, C1=0.0)
Ts = interval_schedule(ag.alpha1, 0.95, 0.9)
print(f"alpha1 = {ag.alpha1:g}: {len(Ts) - 1} steps reach T_last = {Ts[-1]:.4f} > 0.9")
print("first steps: " + ", ".join(f"{t:.4f}" for t in Ts[:6]))

cfg = load_config("constant.cfg")
grid = cfg.grid.frequency_grid()
print("\nG(y) on the constant scenario, T' = 0.01, D = 1")
for k in (2, 6, 10, 40):
    try:
        G = global_bound_G(cfg.spec, cfg.estimate.T1, 1.0, -k * math.log(10), grid)
        print(f"  y = 1e-{k}: log G = {G.log_value:.6g}")
    except AdmissibilityError as exc:
        print(f"  y = 1e-{k}: inadmissible ({exc})")

c = select_constants(OperatorSpec.constant(1, 1.0, omega=Modulus.sec4()), 0.5)
print(f"\nexplicit bound, tau = {c.tau:.6f}, delta1 = {c.delta1:.3e}")
for u in (1e-10, 1e-6, 1e-2):
    b = explicit_bound_sec4(c, math.log(u), check_admissibility=False)
    print(f"  u0^2 = {u:.0e}: bound = {b.bound:.16f}, exponent excess = {b.exponent_excess:.4e}, "
          f"admissible = {b.admissible}")
