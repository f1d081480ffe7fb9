"""Quantum channels, positive trace-preserving maps and monotonicity checks."""

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .errors import DimensionMismatch, NotTracePreserving, SingularOperator
from .fidelity import INEQUALITY_TOL, _fidelity_value, trace_norm_bound_rhs
from .linalg import (RANK_TOL, as_matrix, as_positive, dagger, hermitian_part,
                     is_invertible, powm)
from .states import as_rng, random_density, random_isometry, random_pure, random_unitary

COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True)
class KrausChannel:
    """``rho -> sum_i K_i rho K_i^dag`` with ``sum_i K_i^dag K_i = I``."""

    kraus_ops: np.ndarray
    tol: float = COMPLETENESS_TOL
    completeness_defect: float = field(init=False)

    def __post_init__(self):
        ops = np.asarray(self.kraus_ops, dtype=np.complex128)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] == 0:
            raise DimensionMismatch(f'expected a stack of Kraus operators, got {ops.shape}')
        defect = float(np.abs(np.einsum('kai,kaj->ij', ops.conj(), ops)
                              - np.eye(ops.shape[2])).max())
        if defect > self.tol:
            raise NotTracePreserving(f'completeness defect {defect:.3e}')
        object.__setattr__(self, 'kraus_ops', ops)
        object.__setattr__(self, 'completeness_defect', defect)

    @property
    def dim_in(self) -> int:
        return self.kraus_ops.shape[2]

    @property
    def dim_out(self) -> int:
        return self.kraus_ops.shape[1]

    def __call__(self, rho):
        return apply(self, rho)

    def adjoint(self) -> 'AdjointMap':
        return adjoint(self)


@dataclass(frozen=True)
class AdjointMap:
    """Heisenberg-picture dual ``A -> sum_i K_i^dag A K_i``; positive and unital."""

    channel: KrausChannel

    def __call__(self, A):
        K = self.channel.kraus_ops
        A = np.asarray(A, dtype=np.complex128)
        if A.shape != (self.channel.dim_out,) * 2:
            raise DimensionMismatch(f'operator {A.shape} for output dim {self.channel.dim_out}')
        return np.einsum('kai,ab,kbj->ij', K.conj(), A, K)


@dataclass(frozen=True)
class PositiveMap:
    """Transpose composed with a channel: trace preserving and positive but not CP."""

    channel: KrausChannel

    trace_preserving = True

    def __call__(self, rho):
        return apply(self.channel, rho).T

    def adjoint(self):
        dual = adjoint(self.channel)
        return lambda A: dual(np.asarray(A).T)


def apply(channel: KrausChannel, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (channel.dim_in,) * 2:
        raise DimensionMismatch(f'state {rho.shape} for channel input dim {channel.dim_in}')
    K = channel.kraus_ops
    return hermitian_part(np.einsum('kai,ij,kbj->ab', K, rho, K.conj()))


def adjoint(channel: KrausChannel) -> AdjointMap:
    return AdjointMap(channel)


def random_cptp(dim_in: int, dim_out: int, kraus_count: int, seed=None) -> KrausChannel:
    """Channel from a Haar-random isometry ``C^{dim_in} -> C^{dim_out * kraus_count}``."""
    if kraus_count < 1:
        raise ValueError('kraus_count must be at least 1')
    V = random_isometry(dim_in, dim_out * kraus_count, as_rng(seed))
    return KrausChannel(V.reshape(kraus_count, dim_out, dim_in))


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(np.eye(d)[None])


def unitary_channel(U) -> KrausChannel:
    return KrausChannel(as_matrix(U)[None])


def depolarizing_channel(d: int, p: float = 1.0) -> KrausChannel:
    """``rho -> (1 - p) rho + p Tr(rho) I / d``."""
    ops = [np.sqrt(1.0 - p) * np.eye(d)] if p < 1 else []
    for i in range(d):
        for j in range(d):
            K = np.zeros((d, d))
            K[i, j] = np.sqrt(p / d)
            ops.append(K)
    return KrausChannel(np.stack(ops))


def partial_trace_channel(dims, keep: int) -> KrausChannel:
    """Tracing out one factor of ``C^{d0} (x) C^{d1}``, as a Kraus channel."""
    d0, d1 = dims
    if keep == 0:
        ops = [np.kron(np.eye(d0), np.eye(d1)[j][None, :]) for j in range(d1)]
    else:
        ops = [np.kron(np.eye(d0)[j][None, :], np.eye(d1)) for j in range(d0)]
    return KrausChannel(np.stack(ops))


class InequalityCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def choi_inequality_check(psi: Callable, A, tol: float = INEQUALITY_TOL,
                          rank_tol: float = RANK_TOL) -> InequalityCheck:
    """``Psi(A^{-1}) >= Psi(A)^{-1}`` for a unital positive ``Psi`` and ``A > 0``.

    ``lhs`` is the smallest eigenvalue of ``Psi(A^{-1}) - Psi(A)^{-1}`` and
    ``rhs`` is zero.
    """
    A = as_positive(A)
    if not is_invertible(A, rank_tol):
        raise SingularOperator('A must be strictly positive')
    left = psi(np.linalg.inv(A))
    image = psi(A)
    if not is_invertible(image, rank_tol):
        raise SingularOperator('Psi(A) is singular; Psi is not unital')
    gap = np.linalg.eigvalsh(hermitian_part(left - np.linalg.inv(image)))[0]
    return InequalityCheck(float(gap), 0.0, bool(gap >= -tol))


class MonotonicityCheck(NamedTuple):
    before: float
    after: float
    holds: bool


def monotonicity_check(rho1, rho2, phi: Callable, tol: float = INEQUALITY_TOL) -> MonotonicityCheck:
    """``F(Phi rho1, Phi rho2) >= F(rho1, rho2)`` for a trace-preserving positive ``Phi``."""
    rho1, rho2 = as_positive(rho1), as_positive(rho2)
    before = _fidelity_value(rho1, rho2)
    after = _fidelity_value(phi(rho1), phi(rho2))
    return MonotonicityCheck(float(before), float(after), bool(after >= before - tol))


# Candidate functionals Q(rho1, rho2) for the functor conditions.

def fidelity_squared(rho1, rho2) -> float:
    return _fidelity_value(rho1, rho2) ** 2


def power_trace(s: float) -> Callable:
    """``Q = Tr rho1^s rho2^{1-s}``."""
    def q(rho1, rho2):
        return float(np.trace(powm(rho1, s) @ powm(rho2, 1.0 - s)).real)
    q.__name__ = f'power_trace_{s:g}'
    return q


def trace_norm_quarter(rho1, rho2) -> float:
    """``((Tr rho1 + Tr rho2)^2 - ||rho1 - rho2||_1^2) / 4``."""
    return 0.25 * trace_norm_bound_rhs(rho1, rho2)


def trace_product(rho1, rho2) -> float:
    """``Tr rho1 Tr rho2``: monotone and dominating, but wrong on pure pairs."""
    return float(np.trace(rho1).real * np.trace(rho2).real)


FUNCTIONALS = {
    'fidelity_squared': fidelity_squared,
    'power_trace': power_trace(0.5),
    'trace_norm_quarter': trace_norm_quarter,
    'trace_product': trace_product,
}


@dataclass
class FunctorReport:
    name: str
    samples: int
    violations: dict = field(default_factory=lambda: {'pure': [], 'monotone': [], 'dominates': []})
    worst_slack: dict = field(default_factory=lambda: {'pure': np.inf, 'monotone': np.inf,
                                                       'dominates': np.inf})

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())

    def condition_passed(self, condition: str) -> bool:
        return not self.violations[condition]


def functor_conditions_check(Q: Callable, samples: int = 100, dims=(2, 3), seed=0,
                             tol: float = INEQUALITY_TOL, name: str | None = None) -> FunctorReport:
    """Spot-check the conditions characterizing ``Pr`` as the smallest admissible ``Q``.

    On random samples: ``Q(pi1, pi2) = Tr pi1 pi2`` for pure pairs, ``Q`` does
    not decrease under random channels, and ``Q >= Pr``.  Each violation is
    recorded with the dimension and sample index that witnessed it.
    """
    rng = as_rng(seed)
    report = FunctorReport(name or getattr(Q, '__name__', 'Q'), samples)
    for d in dims:
        for i in range(samples):
            p1, p2 = random_pure(d, rng), random_pure(d, rng)
            slack = -abs(Q(p1, p2) - np.trace(p1 @ p2).real)
            _record(report, 'pure', slack, tol, (d, i))

            r1, r2 = random_density(d, rng), random_density(d, rng)
            d_out = int(rng.integers(1, d + 2))
            kraus = int(rng.integers(max(1, -(-d // d_out)), d * d_out + 1))
            phi = random_cptp(d, d_out, kraus, rng)
            _record(report, 'monotone', Q(phi(r1), phi(r2)) - Q(r1, r2), tol, (d, i))
            _record(report, 'dominates', Q(r1, r2) - fidelity_squared(r1, r2), tol, (d, i))
    return report


def _record(report, condition, slack, tol, where):
    report.worst_slack[condition] = min(report.worst_slack[condition], float(slack))
    if slack < -tol:
        report.violations[condition].append({'dim': where[0], 'sample': where[1],
                                             'slack': float(slack)})


def random_unitary_channel(d: int, rng=None) -> KrausChannel:
    return unitary_channel(random_unitary(d, rng))
