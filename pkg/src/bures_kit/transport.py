"""Amplitudes, parallel transport and holonomy along curves of density operators.

An amplitude of ``rho`` is any ``W`` with ``W W^dag = rho``; ``W -> W U``
with ``U`` unitary is a gauge transformation.  A lift ``s -> W_s`` of a
curve ``s -> rho_s`` is parallel when ``Wdot^dag W = W^dag Wdot``, which
holds for ``Wdot = G W`` with Hermitian ``G`` solving
``rhodot = G rho + rho G``.  The Bures length of the curve is
``int (Tr G rho G)^{1/2} ds``.
"""

from dataclasses import dataclass
from typing import NamedTuple, Sequence
import warnings

import numpy as np

from .errors import (CurveResolutionWarning, DimensionMismatch, NotClosed,
                     RegularizationWarning, SingularAmplitude, SingularState,
                     VanishingOverlap)
from .fidelity import _fidelity_value, geometric_mean_quasi
from .linalg import (RANK_TOL, RESIDUAL_TOL, as_matrix, as_positive, dagger,
                     expm_hermitian, hermitian_part, is_invertible, lyapunov_solve,
                     sqrtm, trace_norm)

CLOSURE_TOL = 1e-8
CURVE_STEP_TOL = 0.1
AMPLITUDE_TOL = 1e-8
PARALLEL_REGULARIZATION = 1e-9

PAULI = np.array([[[0, 1], [1, 0]],
                  [[0, -1j], [1j, 0]],
                  [[1, 0], [0, -1]]], dtype=np.complex128)


def bloch_state(r) -> np.ndarray:
    """Qubit density operator ``(I + r . sigma) / 2``."""
    return 0.5 * (np.eye(2) + np.tensordot(np.asarray(r, dtype=float), PAULI, axes=1))


def mix_with_identity(rho, eps: float) -> np.ndarray:
    """``(1 - eps) rho + eps I / d`` (trace preserving)."""
    d = rho.shape[-1]
    return (1.0 - eps) * rho + eps * np.eye(d) / d


def trace_distance(rho1, rho2) -> float:
    return 0.5 * trace_norm(np.asarray(rho1) - np.asarray(rho2))


def is_amplitude(W, rho, tol: float = AMPLITUDE_TOL) -> bool:
    return bool(np.abs(W @ dagger(W) - rho).max() <= tol * max(1.0, np.abs(rho).max()))


def make_parallel_pair(rho1, rho2, regularize: bool = False, rank_tol: float = RANK_TOL,
                       eps: float = PARALLEL_REGULARIZATION):
    """Amplitudes ``W1 = rho1^{1/2}``, ``W2 = (rho2 # rho1^{[-1]}) rho1^{1/2}``.

    They satisfy ``0 <= W1^dag W2 = W2^dag W1`` and ``Tr W1^dag W2 = F``.
    ``rho1`` must be invertible; with ``regularize`` a singular ``rho1`` is
    replaced by ``(1 - eps) rho1 + eps I / d`` and a warning reports ``eps``.
    """
    rho1, rho2 = as_positive(rho1), as_positive(rho2)
    if rho1.shape != rho2.shape:
        raise DimensionMismatch(f'{rho1.shape} vs {rho2.shape}')
    if not is_invertible(rho1, rank_tol):
        if not regularize:
            raise SingularState('first state must be invertible for a parallel pair')
        rho1 = mix_with_identity(rho1, eps)
        warnings.warn(f'first state regularized with eps = {eps:.1e}',
                      RegularizationWarning, stacklevel=2)
    W1 = sqrtm(rho1)
    W2 = geometric_mean_quasi(rho2, rho1, rank_tol) @ W1
    return W1, W2


def _check_invertible(W, rank_tol):
    sigma = np.linalg.svd(W, compute_uv=False)
    if sigma[-1] ** 2 <= rank_tol * sigma[0] ** 2:
        raise SingularAmplitude(f'amplitude is singular (sigma_min = {sigma[-1]:.3e})')


def gauge_ratio(W1, W2, rank_tol: float = RANK_TOL) -> np.ndarray:
    """``W2 W1^{-1}``; invariant under ``W_j -> W_j U``."""
    W1, W2 = as_matrix(W1), as_matrix(W2)
    if W1.shape != W2.shape:
        raise DimensionMismatch(f'{W1.shape} vs {W2.shape}')
    _check_invertible(W1, rank_tol)
    return np.linalg.solve(W1.T, W2.T).T


@dataclass(frozen=True)
class DensityCurve:
    """Curve ``s -> rho_s`` sampled on a strictly increasing grid."""

    grid: np.ndarray
    states: np.ndarray
    curve_step_tol: float = CURVE_STEP_TOL

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        states = np.asarray(self.states, dtype=np.complex128)
        if grid.ndim != 1 or grid.size < 2:
            raise ValueError('grid needs at least two points')
        if np.any(np.diff(grid) <= 0):
            raise ValueError('grid must be strictly increasing')
        if states.ndim != 3 or states.shape[0] != grid.size or states.shape[1] != states.shape[2]:
            raise DimensionMismatch(f'states of shape {states.shape} for {grid.size} grid points')
        states = np.stack([as_positive(r) for r in states])
        object.__setattr__(self, 'grid', grid)
        object.__setattr__(self, 'states', states)
        worst = max(trace_distance(a, b) for a, b in zip(states[:-1], states[1:]))
        if worst > self.curve_step_tol:
            warnings.warn(f'adjacent states are {worst:.3g} apart in trace distance; '
                          'the grid may not resolve the curve', CurveResolutionWarning,
                          stacklevel=3)

    @classmethod
    def from_function(cls, f, grid, **kwargs) -> 'DensityCurve':
        grid = np.asarray(grid, dtype=np.float64)
        return cls(grid, np.stack([f(s) for s in grid]), **kwargs)

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def __len__(self):
        return self.grid.size

    def is_closed(self, tol: float = CLOSURE_TOL) -> bool:
        return trace_distance(self.states[0], self.states[-1]) <= tol

    def regularized(self, eps: float) -> 'DensityCurve':
        return DensityCurve(self.grid, mix_with_identity(self.states, eps), self.curve_step_tol)


@dataclass(frozen=True)
class TransportResult:
    amplitudes: np.ndarray
    cotangents: np.ndarray
    bures_length: float
    step_lengths: np.ndarray
    step_defects: np.ndarray
    parallelity_defects: np.ndarray
    amplitude_defect: float
    lyapunov_residuals: np.ndarray
    holonomy: np.ndarray | None = None
    phase: float | None = None
    unitarity_defect: float | None = None

    @property
    def parallelity_defect(self) -> float:
        """Largest continuous parallelity defect over interior nodes."""
        if self.parallelity_defects.size == 0:
            return float('nan')
        return float(self.parallelity_defects.max())


def _stencil_weights(nodes, center):
    """First-derivative weights at ``center`` exact for polynomials of degree < len(nodes)."""
    h = np.asarray(nodes) - center
    n = h.size
    V = np.vander(h, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[1] = 1.0
    return np.linalg.solve(V, rhs)


def continuous_parallelity_defects(lift, grid) -> np.ndarray:
    """``||Wdot^dag W - W^dag Wdot||_max`` at interior nodes with a five-point stencil.

    Nearest-neighbour differences of an exponential-step lift are parallel
    to rounding by construction, so this uses a fourth-order derivative
    estimate.  For an exactly parallel smooth lift the result is
    ``O(ds^4)``; for the integrator's lift it measures the ``O(ds^2)``
    departure from the continuous parallelity condition.
    """
    lift = np.asarray(lift)
    grid = np.asarray(grid, dtype=np.float64)
    out = []
    for k in range(2, grid.size - 2):
        w = _stencil_weights(grid[k - 2:k + 3], grid[k])
        Wdot = np.tensordot(w, lift[k - 2:k + 3], axes=1)
        W = lift[k]
        out.append(np.abs(dagger(Wdot) @ W - dagger(W) @ Wdot).max())
    return np.asarray(out)


def transport(curve: DensityCurve, W0=None, *, scheme: str = 'midpoint',
              holonomy: bool | None = None, closure_tol: float = CLOSURE_TOL,
              rank_tol: float = RANK_TOL, residual_tol: float = RESIDUAL_TOL,
              amplitude_tol: float = AMPLITUDE_TOL) -> TransportResult:
    """Parallel transport of ``W0`` along ``curve``.

    Each step solves ``rhodot = G rho + rho G`` and advances
    ``W <- exp(G ds) W``.  With ``scheme='midpoint'`` (second order) ``rho``
    is the mean of the step's end points and ``rhodot`` the forward
    difference; ``scheme='left'`` uses the left end point (first order).

    ``holonomy=None`` computes the holonomy only for closed curves;
    ``holonomy=True`` raises ``NotClosed`` on an open curve.
    """
    if scheme not in ('midpoint', 'left'):
        raise ValueError(f'unknown scheme {scheme!r}')
    states, grid = curve.states, curve.grid
    W = sqrtm(states[0]) if W0 is None else as_matrix(W0)
    if W.shape != states[0].shape:
        raise DimensionMismatch(f'amplitude {W.shape} for states of dim {curve.dim}')
    if not is_amplitude(W, states[0], amplitude_tol):
        raise ValueError('W0 is not an amplitude of the first state')
    closed = curve.is_closed(closure_tol)
    if holonomy and not closed:
        raise NotClosed(f'end points are {trace_distance(states[0], states[-1]):.3e} apart')

    n = grid.size - 1
    lift = [W]
    cotangents, lengths, residuals, defects = [], [], [], []
    for k in range(n):
        ds = grid[k + 1] - grid[k]
        rho = 0.5 * (states[k] + states[k + 1]) if scheme == 'midpoint' else states[k]
        rhodot = (states[k + 1] - states[k]) / ds
        G, res = lyapunov_solve(rho, rhodot, rank_tol, residual_tol)
        W_next = expm_hermitian(G, ds) @ W
        cotangents.append(G)
        residuals.append(res)
        lengths.append(ds * np.sqrt(max(np.trace(G @ rho @ G).real, 0.0)))
        defects.append(np.abs(dagger(W) @ W_next - dagger(W_next) @ W).max())
        lift.append(W_next)
        W = W_next
    lift = np.stack(lift)
    amp_defect = max(np.abs(L @ dagger(L) - r).max() for L, r in zip(lift, states))

    hol = phase = unitarity = None
    if closed and holonomy is not False:
        W_start, W_end = lift[0], lift[-1]
        hol = np.linalg.solve(W_start, W_end)
        unitarity = float(np.abs(dagger(hol) @ hol - np.eye(curve.dim)).max())
        phase = float(np.angle(np.trace(dagger(W_start) @ W_end)))

    return TransportResult(
        amplitudes=lift,
        cotangents=np.stack(cotangents),
        bures_length=float(np.sum(lengths)),
        step_lengths=np.asarray(lengths),
        step_defects=np.asarray(defects),
        parallelity_defects=continuous_parallelity_defects(lift, grid),
        amplitude_defect=float(amp_defect),
        lyapunov_residuals=np.asarray(residuals),
        holonomy=hol,
        phase=phase,
        unitarity_defect=unitarity,
    )


class PureTransport(NamedTuple):
    vectors: np.ndarray
    phase: float


def pure_state_transport(vectors, overlap_tol: float = 1e-12) -> PureTransport:
    """Parallel lift of a sampled curve of unit vectors.

    Each vector is rephased so that its overlap with its predecessor is
    real and positive.  ``phase`` is ``arg <psi_0, psi_N>`` of the lifted
    end point, the geometric phase when the curve of rays is closed.
    """
    vectors = np.asarray(vectors, dtype=np.complex128)
    lifted = [vectors[0]]
    for v in vectors[1:]:
        overlap = np.vdot(lifted[-1], v)
        if abs(overlap) <= overlap_tol:
            raise VanishingOverlap('adjacent vectors are orthogonal')
        lifted.append(v * np.exp(-1j * np.angle(overlap)))
    lifted = np.stack(lifted)
    return PureTransport(lifted, float(np.angle(np.vdot(lifted[0], lifted[-1]))))


def gauge_potential(curve: DensityCurve, lift, rank_tol: float = RANK_TOL) -> np.ndarray:
    """``A_k = W_k^{-1} (Wdot_k - G_k W_k)`` at every grid node.

    Derivatives are second-order finite differences on the curve's grid;
    ``G_k`` solves ``rhodot_k = G_k rho_k + rho_k G_k``.
    """
    lift = np.asarray(lift, dtype=np.complex128)
    if lift.shape != curve.states.shape:
        raise DimensionMismatch(f'lift {lift.shape} for curve states {curve.states.shape}')
    grid = curve.grid
    Wdot = np.gradient(lift, grid, axis=0, edge_order=2)
    rhodot = np.gradient(curve.states, grid, axis=0, edge_order=2)
    out = []
    for W, Wd, rho, rd in zip(lift, Wdot, curve.states, rhodot):
        _check_invertible(W, rank_tol)
        with warnings.catch_warnings():
            warnings.simplefilter('ignore')
            G = lyapunov_solve(rho, rd, rank_tol).G
        out.append(np.linalg.solve(W, Wd - G @ W))
    return np.stack(out)


def bures_length_of_lift(lift, grid) -> float:
    """``int (Tr Wdot Wdot^dag)^{1/2} ds`` with one-step differences."""
    lift = np.asarray(lift)
    if lift.ndim != 3 or len(lift) != len(np.asarray(grid)):
        raise DimensionMismatch(f'lift of shape {lift.shape} for {len(grid)} grid points')
    steps = lift[1:] - lift[:-1]
    return float(np.sqrt(np.einsum('kij,kij->k', steps.conj(), steps).real).sum())


def bures_distance(rho1, rho2) -> float:
    """``(Tr rho1 + Tr rho2 - 2 F)^{1/2}``, i.e. ``(2 - 2F)^{1/2}`` for density operators."""
    rho1, rho2 = as_positive(rho1), as_positive(rho2)
    val = np.trace(rho1).real + np.trace(rho2).real - 2.0 * _fidelity_value(rho1, rho2)
    return float(np.sqrt(max(val, 0.0)))


def gauge_lift(lift, unitaries: Sequence[np.ndarray]) -> np.ndarray:
    """``W_k -> W_k U_k``."""
    return np.stack([W @ U for W, U in zip(lift, unitaries)])
