"""Purifications in H (x) H and the maximal overlap defining Pr.

A vector ``v`` in ``H_left (x) H_right`` is stored through its coefficient
matrix ``C`` with ``v = sum_ab C[a, b] |a>|b>`` (numpy ``kron`` ordering).
The maximally entangled reference ``sum_i |i>|i>`` is kept unnormalized, so
``(W (x) 1)|phi>`` has coefficient matrix ``W`` and its reduction to the left
factor is exactly ``W W^dag``.  The reduction to the right factor is
``(W^dag W)^T``; the transpose is part of the basis convention.
"""

from dataclasses import dataclass, field
from typing import NamedTuple
import warnings

import numpy as np

from ._optimize import OptimizerOptions, herm_to_vec, minimize, vec_to_herm
from .errors import DimensionMismatch, NotConverged
from .fidelity import _fidelity_value
from .linalg import (as_matrix, as_positive, check_same_dim, dagger, expm_hermitian,
                     hermitian_part, sqrtm)
from .states import as_rng, random_unitary


@dataclass(frozen=True)
class PureVector:
    entries: np.ndarray
    dim_left: int
    dim_right: int

    def __post_init__(self):
        if self.entries.shape != (self.dim_left * self.dim_right,):
            raise DimensionMismatch(
                f'{self.entries.shape} entries for dims {self.dim_left} x {self.dim_right}')

    @property
    def coefficients(self) -> np.ndarray:
        return self.entries.reshape(self.dim_left, self.dim_right)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    @property
    def normalized(self) -> bool:
        return abs(self.norm - 1.0) <= 1e-10

    def projector(self) -> np.ndarray:
        return np.outer(self.entries, self.entries.conj())

    def inner(self, other: 'PureVector') -> complex:
        """``<self, other>``, antilinear in ``self``."""
        return complex(np.vdot(self.entries, other.entries))


def partial_trace(op, dims, keep: int) -> np.ndarray:
    """Reduce an operator on ``H_0 (x) H_1`` to factor ``keep`` (0 or 1)."""
    d0, d1 = dims
    t = np.asarray(op).reshape(d0, d1, d0, d1)
    if keep == 0:
        return np.einsum('ajbj->ab', t)
    return np.einsum('jajb->ab', t)


def reduced_left(v: PureVector) -> np.ndarray:
    """``Tr' |v><v|``: the state on the left factor."""
    C = v.coefficients
    return C @ dagger(C)


def reduced_right(v: PureVector) -> np.ndarray:
    C = v.coefficients
    return (dagger(C) @ C).T


def max_entangled(d: int) -> PureVector:
    """Unnormalized ``sum_i |i>|i>``."""
    if d < 1:
        raise ValueError('dimension must be at least 1')
    return PureVector(np.eye(d, dtype=np.complex128).reshape(-1), d, d)


def purify(W) -> PureVector:
    """``(W (x) 1)|phi>`` with ``phi`` the unnormalized maximally entangled vector."""
    W = as_matrix(W)
    d = W.shape[0]
    return PureVector(W.reshape(-1).copy(), d, d)


def nu12(W1, W2) -> np.ndarray:
    """``nu_12 = W2 W1^dag``."""
    W1, W2 = as_matrix(W1), as_matrix(W2)
    check_same_dim(W1, W2)
    return W2 @ dagger(W1)


def nu12_from_purifications(phi1: PureVector, phi2: PureVector) -> np.ndarray:
    """``Tr' |phi2><phi1|`` computed from the coefficient matrices."""
    return phi2.coefficients @ dagger(phi1.coefficients)


def cauchy_schwarz_gap(nu, rho1, rho2, A1, A2) -> float:
    """``(Tr A1^dag A1 rho1)(Tr A2^dag A2 rho2) - |Tr nu A1^dag A2|^2``; never negative for admissible ``nu``."""
    rhs = (np.trace(dagger(A1) @ A1 @ rho1).real * np.trace(dagger(A2) @ A2 @ rho2).real)
    return float(rhs - abs(np.trace(nu @ dagger(A1) @ A2)) ** 2)


@dataclass
class OverlapResult:
    value: float
    U1: np.ndarray
    U2: np.ndarray
    iterations: int
    converged: bool
    history: list = field(default_factory=list, repr=False)


def max_overlap(rho1, rho2, opts: OptimizerOptions | None = None) -> OverlapResult:
    """Maximize ``|<phi1, phi2>|^2`` over purifications ``phi_j = (rho_j^{1/2} U_j (x) 1)|phi>``.

    The overlap equals ``Tr U1^dag rho1^{1/2} rho2^{1/2} U2``.  The pair of
    unitaries is updated along geodesics ``U <- U exp(i K)`` with quasi-Newton
    directions in the left-trivialized tangent space.  ``history`` holds the
    overlap after each accepted step.
    """
    rho1, rho2 = as_positive(rho1), as_positive(rho2)
    check_same_dim(rho1, rho2)
    opts = opts or OptimizerOptions()
    d = rho1.shape[0]
    n = d * d
    M = sqrtm(rho1) @ sqrtm(rho2)

    def fun_grad(point):
        U1, U2 = point
        B = dagger(U1) @ M @ U2
        z = np.trace(B)
        g2 = hermitian_part(2j * z * dagger(B))
        return -abs(z) ** 2, np.concatenate([herm_to_vec(-g2), herm_to_vec(g2)])

    def retract(point, step):
        U1, U2 = point
        return (U1 @ expm_hermitian(vec_to_herm(step[:n], d), 1j),
                U2 @ expm_hermitian(vec_to_herm(step[n:], d), 1j))

    eye = np.eye(d, dtype=np.complex128)
    trace = minimize(fun_grad, (eye, eye), retract, opts)
    if not trace.converged:
        warnings.warn(f'overlap ascent stopped after {trace.iterations} iterations',
                      NotConverged, stacklevel=2)
    U1, U2 = trace.point
    return OverlapResult(-trace.value, U1, U2, trace.iterations, trace.converged,
                         [-h for h in trace.history])


class SupNuReport(NamedTuple):
    best: float
    bound: float
    parallel_value: float
    holds: bool
    attained: bool
    constraint_ok: bool


def sup_nu_check(rho1, rho2, samples: int = 500, seed=0, tol: float = 1e-9,
                 attain_tol: float = 1e-8) -> SupNuReport:
    """Sample admissible ``nu_12 = W2 W1^dag`` and compare ``|Tr nu_12|^2`` with ``Pr``.

    Amplitudes are ``W_j = rho_j^{1/2} V_j`` with Haar-random ``V_j``.  Each
    sample is also checked against the Cauchy-Schwarz constraint with a
    pair of random probe operators.  The parallel pair must attain ``Pr``.
    """
    from .transport import make_parallel_pair

    if samples < 1:
        raise ValueError('samples must be at least 1')
    rho1, rho2 = as_positive(rho1), as_positive(rho2)
    check_same_dim(rho1, rho2)
    rng = as_rng(seed)
    d = rho1.shape[0]
    s1, s2 = sqrtm(rho1), sqrtm(rho2)
    bound = _fidelity_value(rho1, rho2) ** 2
    best = 0.0
    constraint_ok = True
    for _ in range(samples):
        nu = nu12(s1 @ random_unitary(d, rng), s2 @ random_unitary(d, rng))
        best = max(best, abs(np.trace(nu)) ** 2)
        A1, A2 = rng.standard_normal((2, d, d)) + 1j * rng.standard_normal((2, d, d))
        constraint_ok &= cauchy_schwarz_gap(nu, rho1, rho2, A1, A2) >= -tol
    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        W1, W2 = make_parallel_pair(rho1, rho2, regularize=True)
    parallel_value = abs(np.trace(nu12(W1, W2))) ** 2
    return SupNuReport(float(best), float(bound), float(parallel_value),
                       bool(best <= bound + tol), bool(abs(parallel_value - bound) <= attain_tol),
                       bool(constraint_ok))
