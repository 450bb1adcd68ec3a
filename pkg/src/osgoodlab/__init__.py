"""Numerical laboratory for conditional stability of backward parabolic equations
whose coefficients have Osgood-type time regularity."""

from .modulus import (Modulus, parse_modulus, eval_modulus, osgood_integral, classify_osgood,
                      seminorm, check_modulus_axioms, ModulusDomainError, QuadratureError)
from .weights import WeightCalculus, WeightOverflow, WeightDomainError
from .grid import FreqGrid, Snapshot
from .report import EstimateReport
from .operator import (OperatorSpec, SpectralSolution, parse_profile, generate_solution,
                       evolve_mode, extend_operator, check_assumptions, verify_growth_bound,
                       smoothing_exponent, mollification_constants)
from .norms import (sobolev_norm, gevrey_norm, osgood_norm, log_sq_sobolev, log_sq_gevrey,
                    log_sq_osgood, embedding_constant)
from .estimator import (EstimateConstants, AdmissibilityError, SearchFailure, select_constants,
                        find_alpha1_gamma1, choose_beta, pointwise_estimate_check,
                        integral_estimate_check, local_bound, local_estimate_check,
                        global_bound_G, sandwich_check, explicit_bound_sec4, appendix_ratio,
                        regime_probe)

__version__ = "0.1.0"
