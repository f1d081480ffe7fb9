"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
``as_*`` helpers validate inputs at the public boundary and return
Hermitian-symmetrized copies; everything downstream assumes validated input.

Tolerances are absolute for matrices of unit scale and grow with
``max(1, ||M||_max)`` for larger ones.
"""

from typing import Callable, NamedTuple
import warnings

import numpy as np

from .errors import (ConvergenceFailure, DimensionMismatch, DomainError,
                     NonHermitian, NotNormalized, NotPositive, SingularSupport)

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
RANK_TOL = 1e-9
RESIDUAL_TOL = 1e-8

_EPS = np.finfo(np.float64).eps


def dagger(M):
    return np.conj(np.swapaxes(M, -1, -2))


def hermitian_part(M):
    return 0.5 * (M + dagger(M))


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a square, finite complex128 array."""
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f'expected a square matrix, got shape {M.shape}')
    if not np.all(np.isfinite(M)):
        raise DomainError('matrix has non-finite entries')
    return M


def _scale(M):
    return max(1.0, float(np.abs(M).max(initial=0.0)))


def as_hermitian(M, tol: float = HERMITIAN_TOL) -> np.ndarray:
    M = as_matrix(M)
    defect = np.abs(M - dagger(M)).max(initial=0.0)
    if defect > tol * _scale(M):
        raise NonHermitian(f'max |M - M^dag| = {defect:.3e} exceeds {tol:.1e}')
    return hermitian_part(M)


def as_positive(M, psd_tol: float = PSD_TOL,
                hermitian_tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate a positive semidefinite operator.

    Eigenvalues in ``(-psd_tol, 0)`` are tolerated; matrix functions clamp
    them to zero.  Anything more negative raises ``NotPositive``.
    """
    M = as_hermitian(M, hermitian_tol)
    w = np.linalg.eigvalsh(M)
    if w.size and w[0] < -psd_tol * max(1.0, abs(w[-1])):
        raise NotPositive(f'smallest eigenvalue {w[0]:.3e} is below -{psd_tol:.1e}')
    return M


def as_density(M, normalized: bool = True, trace_tol: float = TRACE_TOL,
               psd_tol: float = PSD_TOL) -> np.ndarray:
    M = as_positive(M, psd_tol)
    if normalized:
        tr = np.trace(M).real
        if abs(tr - 1.0) > trace_tol:
            raise NotNormalized(f'trace {tr!r} differs from 1 by more than {trace_tol:.1e}')
    return M


def kron(*ops) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for op in ops:
        out = np.kron(out, op)
    return out


def check_same_dim(*mats):
    shapes = {np.shape(m) for m in mats}
    if len(shapes) != 1:
        raise DimensionMismatch(f'operand shapes differ: {sorted(shapes)}')


def eig_hermitian(M, hermitian_tol: float = HERMITIAN_TOL):
    """Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian ``M``."""
    M = as_hermitian(M, hermitian_tol)
    return _eigh(M)


def _eigh(M):
    try:
        return np.linalg.eigh(hermitian_part(M))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def noise_floor(w) -> float:
    """Eigenvalues below this are indistinguishable from zero in double precision."""
    w = np.asarray(w)
    if w.size == 0:
        return 0.0
    return 4 * w.size * _EPS * float(np.abs(w).max())


def _eig_psd(P, psd_tol: float = PSD_TOL):
    """Eigen-decomposition of a positive semidefinite ``P``; rejects clearly negative input."""
    w, V = _eigh(as_hermitian(P))
    if w.size and w[0] < -psd_tol * max(1.0, abs(w[-1])):
        raise NotPositive(f'smallest eigenvalue {w[0]:.3e} is below -{psd_tol:.1e}')
    return w, V


def _from_eig(V, f_w):
    return (V * f_w) @ dagger(V)


def matrix_function(P, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """``V f(Lambda) V^dag`` for a positive semidefinite ``P``.

    Negative eigenvalues (numerical noise) are clamped to zero before ``f``
    is applied.
    """
    w, V = _eig_psd(P)
    w = np.clip(w, 0.0, None)
    with np.errstate(all='ignore'):
        f_w = np.asarray(f(w), dtype=np.float64)
    if not np.all(np.isfinite(f_w)):
        raise DomainError('function is undefined on the spectrum')
    return hermitian_part(_from_eig(V, f_w))


def powm(P, s: float) -> np.ndarray:
    """Quasi-power ``P^s`` for ``s >= 0`` with the convention ``0^s = 0``.

    Eigenvalues under :func:`noise_floor` count as zero.  ``powm(P, 0)`` is
    therefore the support projector.
    """
    if s < 0:
        return quasi_inverse(P, s)
    w, V = _eig_psd(P)
    keep = w > noise_floor(w)
    f_w = np.zeros_like(w)
    f_w[keep] = w[keep] ** s
    return hermitian_part(_from_eig(V, f_w))


def sqrtm(P) -> np.ndarray:
    return powm(P, 0.5)


def _support_mask(w, rank_tol):
    if w.size == 0:
        return np.zeros(0, dtype=bool)
    return (w > rank_tol * float(w[-1])) & (w > 0)


def quasi_inverse(P, power: float = -1.0, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Invert the non-zero eigenvalues of ``P`` (raised to ``-power``).

    An eigenvalue counts as zero when it is at most ``rank_tol * lambda_max``.
    """
    w, V = _eig_psd(P)
    keep = _support_mask(w, rank_tol)
    f_w = np.zeros_like(w)
    f_w[keep] = w[keep] ** power
    return hermitian_part(_from_eig(V, f_w))


def support_projector(P, rank_tol: float = RANK_TOL) -> np.ndarray:
    w, V = _eigh(as_matrix(P))
    keep = _support_mask(w, rank_tol)
    return hermitian_part(_from_eig(V, keep.astype(np.float64)))


def is_invertible(P, rank_tol: float = RANK_TOL) -> bool:
    w = np.linalg.eigvalsh(hermitian_part(as_matrix(P)))
    return bool(_support_mask(w, rank_tol).all())


def expm_hermitian(H, t: complex = 1.0) -> np.ndarray:
    """``exp(t H)`` for Hermitian ``H`` via its eigendecomposition."""
    w, V = _eigh(H)
    return _from_eig(V, np.exp(t * w))


def expm_skew(X) -> np.ndarray:
    """``exp(X)`` for anti-Hermitian ``X``; the result is unitary."""
    return expm_hermitian(1j * X, -1j)


def trace_norm(M) -> float:
    """Sum of singular values."""
    return float(np.linalg.svd(np.asarray(M), compute_uv=False).sum())


def polar_decompose(W):
    """Left polar decomposition ``W = P U`` with ``P = (W W^dag)^{1/2}``.

    For singular ``W`` the unitary is completed on the kernel through the
    SVD, ``U = U_left U_right^dag``.
    """
    W = as_matrix(W)
    U_left, sigma, Vh = np.linalg.svd(W)
    P = hermitian_part((U_left * sigma) @ dagger(U_left))
    return P, U_left @ Vh


class LyapunovSolution(NamedTuple):
    G: np.ndarray
    residual: float


def lyapunov_solve(rho, X, rank_tol: float = RANK_TOL,
                   residual_tol: float = RESIDUAL_TOL) -> LyapunovSolution:
    """Hermitian ``G`` with ``G rho + rho G = X`` on the support of ``rho``.

    Solved in the eigenbasis of ``rho``: ``G_ij = X_ij / (l_i + l_j)``.
    Entries whose denominator is at most ``rank_tol * l_max`` are set to
    zero.  A ``SingularSupport`` warning is issued when the residual
    ``||G rho + rho G - X||_max`` exceeds ``residual_tol``.
    """
    rho = as_matrix(rho)
    X = hermitian_part(as_matrix(X))
    check_same_dim(rho, X)
    w, V = _eigh(rho)
    denom = w[:, None] + w[None, :]
    ok = denom > rank_tol * max(float(w[-1]), 0.0)
    Xt = dagger(V) @ X @ V
    Gt = np.zeros_like(Xt)
    Gt[ok] = Xt[ok] / denom[ok]
    G = hermitian_part(V @ Gt @ dagger(V))
    residual = float(np.abs(G @ rho + rho @ G - X).max(initial=0.0))
    if residual > residual_tol:
        warnings.warn(f'Lyapunov residual {residual:.3e} exceeds {residual_tol:.1e}',
                      SingularSupport, stacklevel=2)
    return LyapunovSolution(G, residual)
