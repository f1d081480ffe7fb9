"""Fidelity as an infimum over positive definite witnesses.

``Pr(rho1, rho2) = inf_{A > 0} (Tr rho1 A)(Tr rho2 A^{-1})`` and
``F(rho1, rho2) = 1/2 inf_{A > 0} (Tr rho1 A + Tr rho2 A^{-1})``.

Witnesses are parameterized as ``A = exp(H)`` with ``H`` Hermitian, which
turns the cone constraint into an unconstrained problem in ``d**2`` real
coordinates.
"""

from dataclasses import dataclass, field
from typing import NamedTuple
import warnings

import numpy as np

from ._optimize import OptimizerOptions, herm_to_vec, minimize, vec_to_herm
from .errors import NegativeWeight, NotConverged, RegularizationWarning, SingularState
from .fidelity import INEQUALITY_TOL, _fidelity_value, geometric_mean_quasi
from .linalg import (as_positive, check_same_dim, dagger, expm_hermitian,
                     hermitian_part, is_invertible, matrix_function, RANK_TOL)

REGULARIZATION = 1e-9


@dataclass
class WitnessResult:
    witness: np.ndarray
    value: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list, repr=False)


def _phi(z):
    """``expm1(z) / z`` with the removable singularity filled in."""
    out = np.ones_like(z)
    nz = z != 0
    out[nz] = np.expm1(z[nz]) / z[nz]
    return out


def _trace_exp(rho, w, V, sign):
    """``Tr rho exp(sign H)`` and its gradient with respect to ``H``.

    ``H = V diag(w) V^dag``.  The derivative of the matrix exponential acts
    in the eigenbasis as a Hadamard product with the divided differences of
    ``x -> exp(sign x)``.
    """
    e = np.exp(sign * w)
    diff = w[:, None] - w[None, :]
    L = sign * e[None, :] * _phi(sign * diff)
    rho_t = dagger(V) @ rho @ V
    value = float(np.dot(e, np.diagonal(rho_t).real))
    grad = hermitian_part(V @ (L * rho_t) @ dagger(V))
    return value, grad


def _objective(rho1, rho2, kind):
    d = rho1.shape[0]

    def fun_grad(x):
        w, V = np.linalg.eigh(vec_to_herm(x, d))
        a, ga = _trace_exp(rho1, w, V, 1.0)
        b, gb = _trace_exp(rho2, w, V, -1.0)
        if kind == 'product':
            return np.log(a) + np.log(b), herm_to_vec(ga / a + gb / b)
        return 0.5 * (a + b), herm_to_vec(0.5 * (ga + gb))

    return fun_grad


def _optimize(rho1, rho2, kind, opts, warm_start):
    rho1, rho2 = as_positive(rho1), as_positive(rho2)
    check_same_dim(rho1, rho2)
    opts = opts or OptimizerOptions()
    d = rho1.shape[0]
    if warm_start:
        H0 = matrix_function(optimal_witness(rho1, rho2, regularize=True), np.log)
    else:
        H0 = np.zeros((d, d), dtype=np.complex128)
    trace = minimize(_objective(rho1, rho2, kind), herm_to_vec(H0), lambda x, p: x + p, opts)
    if not trace.converged:
        warnings.warn(f'{kind} optimization stopped after {trace.iterations} iterations',
                      NotConverged, stacklevel=3)
    history = trace.history
    value = trace.value
    if kind == 'product':
        history = list(np.exp(history))
        value = float(np.exp(value))
    A = expm_hermitian(vec_to_herm(trace.point, d))
    return WitnessResult(A, value, trace.iterations, trace.converged, history)


def inf_product(rho1, rho2, opts: OptimizerOptions | None = None,
                warm_start: bool = False) -> WitnessResult:
    """Minimize ``(Tr rho1 A)(Tr rho2 A^{-1})``; the infimum is ``Pr(rho1, rho2)``.

    The logarithm of the objective is minimized (same minimizer, better
    conditioned); ``value`` and ``history`` are reported on the original scale.
    """
    return _optimize(rho1, rho2, 'product', opts, warm_start)


def inf_sum(rho1, rho2, opts: OptimizerOptions | None = None,
            warm_start: bool = False) -> WitnessResult:
    """Minimize ``1/2 (Tr rho1 A + Tr rho2 A^{-1})``; the infimum is ``F(rho1, rho2)``."""
    return _optimize(rho1, rho2, 'sum', opts, warm_start)


def sum_objective(rho1, rho2, A) -> float:
    return 0.5 * float(np.trace(rho1 @ A).real + np.trace(rho2 @ np.linalg.inv(A)).real)


def product_objective(rho1, rho2, A) -> float:
    return float(np.trace(rho1 @ A).real * np.trace(rho2 @ np.linalg.inv(A)).real)


def shift_by_identity(rho, eps: float | None = None):
    """``rho + eps I`` with ``eps = 1e-9 Tr rho`` by default."""
    if eps is None:
        eps = REGULARIZATION * float(np.trace(rho).real)
    return rho + eps * np.eye(rho.shape[0]), eps


def optimal_witness(rho1, rho2, regularize: bool = False,
                    rank_tol: float = RANK_TOL) -> np.ndarray:
    """The saturating witness ``A* = rho2 # rho1^{[-1]}``.

    It satisfies ``Tr rho1 A* = Tr rho2 A*^{-1} = F(rho1, rho2)``.  Singular
    input raises ``SingularState`` unless ``regularize`` is set, in which
    case both states are shifted by ``eps I`` and a ``RegularizationWarning``
    reports ``eps``.
    """
    rho1, rho2 = as_positive(rho1), as_positive(rho2)
    check_same_dim(rho1, rho2)
    if not (is_invertible(rho1, rank_tol) and is_invertible(rho2, rank_tol)):
        if not regularize:
            raise SingularState('optimal witness needs invertible states; '
                                'pass regularize=True to shift by eps I')
        rho1, eps1 = shift_by_identity(rho1)
        rho2, eps2 = shift_by_identity(rho2)
        warnings.warn(f'states regularized with eps = {eps1:.3e}, {eps2:.3e}',
                      RegularizationWarning, stacklevel=2)
    return geometric_mean_quasi(rho2, rho1, rank_tol)


class ConcavityCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool
    orthogonal: bool
    equality: bool


def concavity_check(states1, states2, tol: float = INEQUALITY_TOL,
                    orth_tol: float = 1e-12) -> ConcavityCheck:
    """``F(sum l_j rho_j, sum m_k w_k) >= sum sqrt(l_j m_j) F(rho_j, w_j)``.

    ``states1`` and ``states2`` are equally long sequences of
    ``(weight, operator)`` pairs.  ``orthogonal`` reports whether
    ``rho_j w_k = 0`` for all ``j != k``, in which case equality is expected;
    ``equality`` tells whether it was observed within ``tol``.
    """
    if len(states1) != len(states2):
        raise ValueError('both mixtures need the same number of terms')
    weights1 = [float(lam) for lam, _ in states1]
    weights2 = [float(mu) for mu, _ in states2]
    if min(weights1 + weights2) < 0:
        raise NegativeWeight('mixture weights must be non-negative')
    rhos = [as_positive(r) for _, r in states1]
    omegas = [as_positive(w) for _, w in states2]
    check_same_dim(*rhos, *omegas)
    mix1 = sum(lam * r for lam, r in zip(weights1, rhos))
    mix2 = sum(mu * w for mu, w in zip(weights2, omegas))
    lhs = _fidelity_value(mix1, mix2)
    rhs = sum(np.sqrt(lam * mu) * _fidelity_value(r, w)
              for lam, mu, r, w in zip(weights1, weights2, rhos, omegas))
    orthogonal = all(np.abs(rhos[j] @ omegas[k]).max() <= orth_tol
                     for j in range(len(rhos)) for k in range(len(omegas)) if j != k)
    return ConcavityCheck(float(lhs), float(rhs), bool(lhs >= rhs - tol), orthogonal,
                          bool(abs(lhs - rhs) <= tol))
