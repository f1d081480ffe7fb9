"""Seeded random states, unitaries and test operators."""

import numpy as np

from .linalg import dagger, hermitian_part


def as_rng(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn(seed, n: int):
    """``n`` independent generators derived deterministically from ``seed``."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def ginibre(rows: int, cols: int, rng=None) -> np.ndarray:
    rng = as_rng(rng)
    return (rng.standard_normal((rows, cols))
            + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(d: int, rng=None) -> np.ndarray:
    """Haar-distributed unitary (QR of a Ginibre matrix with phase fix)."""
    Q, R = np.linalg.qr(ginibre(d, d, rng))
    phases = np.diagonal(R) / np.abs(np.diagonal(R))
    return Q * phases


def random_isometry(d_in: int, d_out: int, rng=None) -> np.ndarray:
    """Haar-random isometry ``V`` of shape ``(d_out, d_in)``, ``V^dag V = I``."""
    if d_out < d_in:
        raise ValueError(f'no isometry from dimension {d_in} into {d_out}')
    Q, R = np.linalg.qr(ginibre(d_out, d_in, rng))
    phases = np.diagonal(R) / np.abs(np.diagonal(R))
    return Q * phases


def random_density(d: int, rng=None, rank: int | None = None) -> np.ndarray:
    """``G G^dag / Tr(G G^dag)`` with ``G`` a ``d x rank`` Ginibre matrix."""
    G = ginibre(d, d if rank is None else rank, rng)
    rho = hermitian_part(G @ dagger(G))
    return rho / np.trace(rho).real


def random_pure_vector(d: int, rng=None) -> np.ndarray:
    psi = ginibre(d, 1, rng)[:, 0]
    return psi / np.linalg.norm(psi)


def random_pure(d: int, rng=None) -> np.ndarray:
    psi = random_pure_vector(d, rng)
    return np.outer(psi, psi.conj())


def random_positive(d: int, rng=None, scale=(0.1, 10.0)) -> np.ndarray:
    """Unnormalized positive operator: a random density times a log-uniform scale."""
    rng = as_rng(rng)
    lo, hi = np.log(scale[0]), np.log(scale[1])
    return random_density(d, rng) * np.exp(rng.uniform(lo, hi))


def random_hermitian(d: int, rng=None) -> np.ndarray:
    return hermitian_part(ginibre(d, d, rng))


def random_invertible(d: int, rng=None) -> np.ndarray:
    return ginibre(d, d, rng)
