"""Fidelity and transition probability between mixed states.

Fidelity here is the square root of the transition probability,
``F(rho1, rho2) = Tr (rho1^{1/2} rho2 rho1^{1/2})^{1/2}``, and
``Pr = F**2``.  Nothing is renormalized: for positive operators that are
not density operators the same formulas apply and ``Pr`` is homogeneous of
degree one in each argument.
"""

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NonPositiveScale
from .linalg import (as_positive, check_same_dim, hermitian_part,
                     noise_floor, powm, quasi_inverse, sqrtm, trace_norm,
                     RANK_TOL)

INEQUALITY_TOL = 1e-9


class Method(str, Enum):
    closed_form = 'closed_form'
    geometric_mean = 'geometric_mean'
    variational = 'variational'
    purification = 'purification'


@dataclass(frozen=True)
class FidelityReport:
    fidelity: float
    transition_probability: float
    method: Method

    @classmethod
    def from_fidelity(cls, value, method):
        value = max(float(value), 0.0)
        return cls(value, value * value, Method(method))


class BoundCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def _sqrt_trace(M) -> float:
    """``Tr M^{1/2}`` for a positive semidefinite ``M``."""
    w = np.linalg.eigvalsh(hermitian_part(M))
    w = w[w > noise_floor(w)]
    return float(np.sqrt(w).sum())


def _fidelity_value(rho1, rho2) -> float:
    s1 = sqrtm(rho1)
    return _sqrt_trace(s1 @ rho2 @ s1)


def fidelity(rho1, rho2) -> FidelityReport:
    """Closed-form fidelity ``Tr (rho1^{1/2} rho2 rho1^{1/2})^{1/2}``."""
    rho1, rho2 = as_positive(rho1), as_positive(rho2)
    check_same_dim(rho1, rho2)
    return FidelityReport.from_fidelity(_fidelity_value(rho1, rho2), Method.closed_form)


def transition_probability(rho1, rho2) -> float:
    return fidelity(rho1, rho2).transition_probability


def geometric_mean_quasi(omega, rho, rank_tol: float = RANK_TOL) -> np.ndarray:
    """``omega # rho^{[-1]} = rho^{[-1/2]} (rho^{1/2} omega rho^{1/2})^{1/2} rho^{[-1/2]}``.

    Defined for every pair of positive operators; ``rho`` may be singular.
    """
    omega, rho = as_positive(omega), as_positive(rho)
    check_same_dim(omega, rho)
    r_half = sqrtm(rho)
    r_inv_half = quasi_inverse(rho, -0.5, rank_tol)
    middle = sqrtm(r_half @ omega @ r_half)
    return hermitian_part(r_inv_half @ middle @ r_inv_half)


def geometric_mean(omega, rho, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Operator geometric mean ``omega # rho``.

    ``rho^{1/2} (rho^{-1/2} omega rho^{-1/2})^{1/2} rho^{1/2}``, which reduces
    to ``(omega rho)^{1/2}`` for commuting arguments and is symmetric in
    them.  A singular ``rho`` is handled with its quasi-inverse, i.e. the
    mean is taken on the support of ``rho``.
    """
    omega, rho = as_positive(omega), as_positive(rho)
    check_same_dim(omega, rho)
    return geometric_mean_quasi(omega, quasi_inverse(rho, -1.0, rank_tol), rank_tol)


def fidelity_via_geometric_mean(rho1, rho2) -> FidelityReport:
    """``F = Tr (rho2 # rho1^{[-1]}) rho1``."""
    rho1, rho2 = as_positive(rho1), as_positive(rho2)
    check_same_dim(rho1, rho2)
    M = geometric_mean_quasi(rho2, rho1)
    return FidelityReport.from_fidelity(np.trace(M @ rho1).real, Method.geometric_mean)


def fidelity_trace_norm(rho1, rho2) -> float:
    """``|| rho1^{1/2} rho2^{1/2} ||_1``, an independent route to F."""
    return trace_norm(sqrtm(as_positive(rho1)) @ sqrtm(as_positive(rho2)))


def scaled_transition_probability(omega1, lam1: float, omega2, lam2: float) -> float:
    """``Pr(lam1 omega1, lam2 omega2)`` evaluated directly on the scaled operators."""
    if not (lam1 > 0 and lam2 > 0):
        raise NonPositiveScale(f'scales must be positive, got {lam1}, {lam2}')
    return transition_probability(lam1 * as_positive(omega1), lam2 * as_positive(omega2))


def bound_power_mean(omega1, omega2, s: float,
                     tol: float = INEQUALITY_TOL) -> BoundCheck:
    """``(Tr w1)^{1-s} (Tr w2)^s Tr w1^s w2^{1-s} >= Pr(w1, w2)``.

    Powers follow the quasi-power convention ``0^s = 0``.
    """
    if not 0.0 <= s <= 1.0:
        raise DomainError(f's must lie in [0, 1], got {s}')
    omega1, omega2 = as_positive(omega1), as_positive(omega2)
    check_same_dim(omega1, omega2)
    t1, t2 = np.trace(omega1).real, np.trace(omega2).real
    overlap = np.trace(powm(omega1, s) @ powm(omega2, 1.0 - s)).real
    lhs = t1 ** (1.0 - s) * t2 ** s * overlap
    rhs = _fidelity_value(omega1, omega2) ** 2
    return BoundCheck(float(lhs), float(rhs), bool(lhs >= rhs - tol))


def trace_norm_bound_rhs(omega1, omega2) -> float:
    """``(Tr w1 + Tr w2)^2 - ||w1 - w2||_1^2``."""
    total = np.trace(omega1).real + np.trace(omega2).real
    return float(total ** 2 - trace_norm(omega1 - omega2) ** 2)


def bound_trace_norm(omega1, omega2, tol: float = INEQUALITY_TOL) -> BoundCheck:
    """``4 Pr(w1, w2) <= (Tr w1 + Tr w2)^2 - ||w1 - w2||_1^2``."""
    omega1, omega2 = as_positive(omega1), as_positive(omega2)
    check_same_dim(omega1, omega2)
    lhs = 4.0 * _fidelity_value(omega1, omega2) ** 2
    rhs = trace_norm_bound_rhs(omega1, omega2)
    return BoundCheck(float(lhs), rhs, bool(lhs <= rhs + tol))
