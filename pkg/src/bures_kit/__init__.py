"""Fidelity, Bures geometry and parallel transport of amplitudes for density operators."""

from .channels import (KrausChannel, PositiveMap, adjoint, apply, choi_inequality_check,
                       functor_conditions_check, monotonicity_check, random_cptp)
from .fidelity import (FidelityReport, bound_power_mean, bound_trace_norm, fidelity,
                       fidelity_via_geometric_mean, geometric_mean, geometric_mean_quasi,
                       scaled_transition_probability, transition_probability)
from .linalg import (eig_hermitian, lyapunov_solve, matrix_function, polar_decompose,
                     quasi_inverse, sqrtm, trace_norm)
from .purification import max_entangled, max_overlap, nu12, purify, sup_nu_check
from .transport import (DensityCurve, TransportResult, bures_distance, bures_length_of_lift,
                        gauge_potential, gauge_ratio, make_parallel_pair,
                        pure_state_transport, transport)
from .variational import concavity_check, inf_product, inf_sum, optimal_witness

__version__ = '0.1.0'
