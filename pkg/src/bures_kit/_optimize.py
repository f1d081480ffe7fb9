"""Quasi-Newton descent with Armijo backtracking on a retraction chart.

Points are opaque to the optimizer.  The caller supplies the objective and
its gradient as a real vector in local (tangent) coordinates, and a
retraction mapping a point and a tangent vector to a new point.  Tangent
spaces are identified with each other (left trivialization on Lie groups,
the identity on vector spaces), so the BFGS update needs no transport.
"""

from dataclasses import dataclass, field

import numpy as np

_ARMIJO_C = 1e-4
_MAX_HALVINGS = 60


@dataclass
class OptimizerOptions:
    max_iter: int = 10_000
    tol: float = 1e-13
    patience: int = 5
    gtol: float = 1e-12
    method: str = 'bfgs'


@dataclass
class OptimizationTrace:
    point: object
    value: float
    iterations: int
    converged: bool
    history: list = field(default_factory=list)


def herm_to_vec(H) -> np.ndarray:
    """Isometric real coordinates of a Hermitian matrix (Frobenius inner product)."""
    iu = np.triu_indices(H.shape[0], 1)
    off = H[iu] * np.sqrt(2)
    return np.concatenate([np.diagonal(H).real, off.real, off.imag])


def vec_to_herm(x, d: int) -> np.ndarray:
    iu = np.triu_indices(d, 1)
    m = len(iu[0])
    H = np.zeros((d, d), dtype=np.complex128)
    H[iu] = (x[d:d + m] + 1j * x[d + m:]) / np.sqrt(2)
    H = H + H.conj().T
    H[np.diag_indices(d)] = x[:d]
    return H


def minimize(fun_grad, x0, retract, opts: OptimizerOptions | None = None) -> OptimizationTrace:
    opts = opts or OptimizerOptions()
    x = x0
    f, g = fun_grad(x)
    n = g.size
    Hinv = np.eye(n)
    history = [f]
    quiet = 0
    converged = False
    it = 0
    for it in range(1, opts.max_iter + 1):
        if np.linalg.norm(g) <= opts.gtol * max(1.0, abs(f)):
            converged = True
            break
        p = -Hinv @ g if opts.method == 'bfgs' else -g
        slope = g @ p
        if slope >= 0:
            Hinv = np.eye(n)
            p, slope = -g, -(g @ g)
        step = _armijo(fun_grad, retract, x, f, p, slope)
        if step is None and opts.method == 'bfgs' and not np.allclose(Hinv, np.eye(n)):
            Hinv = np.eye(n)
            p, slope = -g, -(g @ g)
            step = _armijo(fun_grad, retract, x, f, p, slope)
        if step is None:
            # no decrease representable in double precision: at the optimum
            converged = True
            break
        t, x_new, f_new, g_new = step
        s, y = t * p, g_new - g
        sy = s @ y
        if opts.method == 'bfgs' and sy > 1e-300:
            if it == 1:
                Hinv = np.eye(n) * (sy / (y @ y))
            rho = 1.0 / sy
            Hy = Hinv @ y
            Hinv = (Hinv - rho * (np.outer(s, Hy) + np.outer(Hy, s))
                    + (rho * rho * (y @ Hy) + rho) * np.outer(s, s))
        change = abs(f - f_new) / max(abs(f_new), 1.0)
        x, f, g = x_new, f_new, g_new
        history.append(f)
        quiet = quiet + 1 if change <= opts.tol else 0
        if quiet >= opts.patience:
            converged = True
            break
    return OptimizationTrace(x, float(f), it, converged, history)


def _armijo(fun_grad, retract, x, f, p, slope):
    t = 1.0
    for _ in range(_MAX_HALVINGS):
        x_new = retract(x, t * p)
        f_new, g_new = fun_grad(x_new)
        if np.isfinite(f_new) and f_new <= f + _ARMIJO_C * t * slope and f_new <= f:
            if f_new == f and t * np.linalg.norm(p) < 1e-15:
                return None
            return t, x_new, f_new, g_new
        t *= 0.5
    return None
