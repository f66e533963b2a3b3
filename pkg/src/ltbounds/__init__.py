"""Numerical verification of Lieb-Thirring constant bounds on S^4 and T^4.

    0.0844 <= K4(S^4) <= 0.1728,    0.0190 <= K4(T^4) <= 0.1222
"""

__version__ = "0.1.0"

from .errors import DomainError, FamilyValidationError, RangeError  # noqa: E402
from .special import beta, bernoulli, constants, integrate  # noqa: E402
from .sphere_spectrum import lower_bound_limit, lower_bound_ratio, shell, shell_sums  # noqa: E402
from .sphere_momentum import (  # noqa: E402
    delta_crossover,
    delta_e,
    euler_maclaurin_audit,
    spectral_ratio,
    spectral_series,
    sphere_upper_bound,
)
from .torus_lattice import lattice_sum, poisson_audit, r4_table, torus_upper_bound  # noqa: E402
from .families import (  # noqa: E402
    TrigFamily,
    dual_constant,
    kinetic_constant,
    sphere_shell_family,
    torus_box_family,
    trig_family_ratio,
)

__all__ = [
    "DomainError", "FamilyValidationError", "RangeError",
    "beta", "bernoulli", "constants", "integrate",
    "lower_bound_limit", "lower_bound_ratio", "shell", "shell_sums",
    "delta_crossover", "delta_e", "euler_maclaurin_audit", "spectral_ratio", "spectral_series",
    "sphere_upper_bound",
    "lattice_sum", "poisson_audit", "r4_table", "torus_upper_bound",
    "TrigFamily", "dual_constant", "kinetic_constant", "sphere_shell_family", "torus_box_family",
    "trig_family_ratio",
]
