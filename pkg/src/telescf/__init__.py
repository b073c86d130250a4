"""Exact-rational engine for telescoping continued-fraction bounds on the
error term r_n in Stirling's formula ``n! = sqrt(2 pi) n^(n+1/2) e^(-n) e^(r_n)``."""

__version__ = "0.1.0"

from .binet import Interval, bernoulli, binet_interval, epsilon_interval, stirling_bracket, stirling_coeff
from .bounds import BoundSpec, classical_bound, compare_bounds, eval_g, sandwich_check
from .exact import Poly, SignKind, SignVerdict, joint_content_normalize, poly_eval, sign_on_ray
from .legendre import convergent_value, legendre_pair, to_z_form
from .qd import qd_agreement_check, qd_scheme
from .telescope import CFCoefficients, run_algorithm, stabilization_table, stabilized_coefficients

__all__ = [
    "BoundSpec", "CFCoefficients", "Interval", "Poly", "SignKind", "SignVerdict",
    "bernoulli", "binet_interval", "classical_bound", "compare_bounds", "qd_agreement_check",
    "convergent_value", "epsilon_interval", "eval_g", "joint_content_normalize", "legendre_pair",
    "poly_eval", "qd_scheme", "run_algorithm", "sandwich_check", "sign_on_ray",
    "stabilization_table", "stabilized_coefficients", "stirling_bracket", "stirling_coeff",
    "to_z_form",
]
