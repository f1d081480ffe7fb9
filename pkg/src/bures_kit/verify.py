"""Seeded randomized verification suites.

Each suite returns a :class:`SuiteReport` counting checks, failures and the
worst slack (the most negative margin observed; negative beyond tolerance
means a violation).  Reports depend only on their arguments, so equal seeds
give identical reports.
"""

from dataclasses import dataclass, field
import warnings

import numpy as np

from .channels import (FUNCTIONALS, PositiveMap, functor_conditions_check,
                       monotonicity_check, partial_trace_channel, random_cptp)
from .config import RunConfig
from .errors import UnknownSuite
from .fidelity import (bound_power_mean, bound_trace_norm, scaled_transition_probability,
                       transition_probability)
from .states import random_density, random_positive, spawn
from .transport import (DensityCurve, bloch_state, bures_length_of_lift, gauge_lift,
                        gauge_potential, mix_with_identity, pure_state_transport, transport)
from .variational import concavity_check

SUITES = ('monotonicity', 'concavity', 'bounds', 'functor', 'transport')
POWER_MEAN_S = tuple(np.round(np.arange(1, 10) / 10, 1))


@dataclass
class SuiteReport:
    name: str
    checks: int = 0
    failures: int = 0
    worst_slack: float = float('inf')
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, slack: float, tol: float, **where):
        self.checks += 1
        self.worst_slack = min(self.worst_slack, float(slack))
        if slack < -tol:
            self.failures += 1
            self.violations.append({'slack': float(slack), **where})

    def to_dict(self) -> dict:
        return {'name': self.name, 'checks': self.checks, 'failures': self.failures,
                'passed': self.passed, 'worst_slack': self.worst_slack,
                'violations': self.violations, 'details': self.details}


def monotonicity_suite(samples: int = 1000, dims=(2, 3, 4), seed: int = 0,
                       tol: float = 1e-9) -> SuiteReport:
    """``F(Phi rho1, Phi rho2) >= F(rho1, rho2)`` for three families of maps.

    Samples cycle through random channels, transpose-composed channels
    (positive, not completely positive) and partial traces ``C^d (x) C^2 -> C^d``.
    """
    report = SuiteReport('monotonicity')
    for d, rng in zip(dims, spawn(seed, len(dims))):
        for i in range(samples):
            family = ('channel', 'transpose', 'partial_trace')[i % 3]
            if family == 'partial_trace':
                phi = partial_trace_channel((d, 2), keep=0)
                r1, r2 = random_density(2 * d, rng), random_density(2 * d, rng)
            else:
                r1, r2 = random_density(d, rng), random_density(d, rng)
                phi = random_cptp(d, d, int(rng.integers(1, d * d + 1)), rng)
                if family == 'transpose':
                    phi = PositiveMap(phi)
            check = monotonicity_check(r1, r2, phi, tol)
            report.record(check.after - check.before, tol, dim=d, sample=i, family=family)
    return report


def concavity_suite(samples: int = 200, dim: int = 3, terms: int = 3, seed: int = 0,
                    tol: float = 1e-9) -> SuiteReport:
    report = SuiteReport('concavity')
    rng = np.random.default_rng(seed)
    for i in range(samples):
        lam, mu = rng.dirichlet(np.ones(terms)), rng.dirichlet(np.ones(terms))
        mix1 = [(lam[j], random_density(dim, rng)) for j in range(terms)]
        mix2 = [(mu[j], random_density(dim, rng)) for j in range(terms)]
        check = concavity_check(mix1, mix2, tol)
        report.record(check.lhs - check.rhs, tol, sample=i)
    block = block_orthogonal_concavity(rng)
    report.details['block_equality_gap'] = abs(block.lhs - block.rhs)
    report.record(-abs(block.lhs - block.rhs), tol, sample='block_orthogonal')
    return report


def block_orthogonal_concavity(rng):
    """Two-term mixtures on ``C^2 (+) C^2`` with ``rho_j w_k = 0`` for ``j != k``."""
    def embed(block, which):
        out = np.zeros((4, 4), dtype=np.complex128)
        sl = slice(2 * which, 2 * which + 2)
        out[sl, sl] = block
        return out

    lam, mu = rng.dirichlet(np.ones(2)), rng.dirichlet(np.ones(2))
    mix1 = [(lam[j], embed(random_density(2, rng), j)) for j in range(2)]
    mix2 = [(mu[j], embed(random_density(2, rng), j)) for j in range(2)]
    return concavity_check(mix1, mix2)


def bounds_suite(samples: int = 200, dims=(2, 3, 4), seed: int = 0,
                 tol: float = 1e-9) -> SuiteReport:
    """Power-mean and trace-norm upper bounds on ``Pr`` and the scaling law."""
    report = SuiteReport('bounds')
    rng = np.random.default_rng(seed)
    worst_scaling = 0.0
    for i in range(samples):
        d = dims[i % len(dims)]
        w1, w2 = random_positive(d, rng), random_positive(d, rng)
        for s in POWER_MEAN_S:
            b = bound_power_mean(w1, w2, s, tol)
            report.record(b.lhs - b.rhs, tol, sample=i, bound='power_mean', s=float(s))
        b = bound_trace_norm(w1, w2, tol)
        report.record(b.rhs - b.lhs, tol, sample=i, bound='trace_norm')
        l1, l2 = rng.uniform(0.1, 10.0, size=2)
        r1, r2 = random_density(d, rng), random_density(d, rng)
        direct = scaled_transition_probability(r1, l1, r2, l2)
        gap = abs(direct - l1 * l2 * transition_probability(r1, r2))
        worst_scaling = max(worst_scaling, gap)
        report.record(-gap, tol, sample=i, bound='scaling')
    report.details['worst_scaling_residual'] = worst_scaling
    return report


def functor_suite(functionals=('fidelity_squared', 'power_trace', 'trace_norm_quarter'),
                  samples: int = 100, dims=(2, 3), seed: int = 0,
                  tol: float = 1e-9) -> SuiteReport:
    report = SuiteReport('functor')
    for name in functionals:
        if name not in FUNCTIONALS:
            raise UnknownSuite(f'unknown functional {name!r}; choose from {sorted(FUNCTIONALS)}')
        fr = functor_conditions_check(FUNCTIONALS[name], samples, dims, seed, tol, name)
        for condition, slack in fr.worst_slack.items():
            report.checks += samples * len(dims) - 1
            report.record(slack, tol, functional=name, condition=condition,
                          count=len(fr.violations[condition]))
        report.details[name] = {c: len(v) for c, v in fr.violations.items()}
    return report


def reference_loop(s):
    """A closed, full-rank qubit curve with non-commuting cotangents (period ``2 pi``)."""
    r = np.array([0.5 * np.cos(s), 0.5 * np.sin(s), 0.3 + 0.2 * np.sin(2 * s)])
    return bloch_state(r)


def latitude_vector(theta, phi):
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def wrap_angle(x):
    return float(np.angle(np.exp(1j * x)))


def transport_convergence(resolutions=(100, 200, 400, 800), curve_fn=reference_loop,
                          period: float = 2 * np.pi) -> dict:
    """Error ratios of three second-order quantities under grid halving.

    Length errors are measured against the Richardson extrapolation of the
    two finest grids.
    """
    results = []
    for n in resolutions:
        curve = DensityCurve.from_function(curve_fn, np.linspace(0.0, period, n + 1))
        results.append(transport(curve))
    lengths = [r.bures_length for r in results]
    richardson = (4 * lengths[-1] - lengths[-2]) / 3
    length_err = [abs(L - richardson) for L in lengths]
    pairs = range(len(resolutions) - 2)

    def ratios(values):
        return [values[i] / values[i + 1] for i in pairs]

    return {
        'resolutions': list(resolutions),
        'parallelity_defect': [r.parallelity_defect for r in results],
        'unitarity_defect': [r.unitarity_defect for r in results],
        'length_error': length_err,
        'richardson_length': richardson,
        'ratios': {
            'parallelity_defect': ratios([r.parallelity_defect for r in results]),
            'unitarity_defect': ratios([r.unitarity_defect for r in results]),
            'length_error': ratios(length_err),
        },
        'results': results,
    }


def length_minimality(n: int = 200, gauges: int = 20, seed: int = 0) -> dict:
    """Compare the lift length of a parallel lift with randomly gauged copies.

    Gauge generators are scaled log-uniformly over ``[1e-4, 1]`` so that
    near-identity gauges, where the margin is second order, are included.
    """
    from .states import random_hermitian
    from .linalg import expm_hermitian

    curve = DensityCurve.from_function(reference_loop, np.linspace(0.0, 2 * np.pi, n + 1))
    lift = transport(curve).amplitudes
    parallel = bures_length_of_lift(lift, curve.grid)
    rng = np.random.default_rng(seed)
    gauged = []
    for _ in range(gauges):
        K0, K1 = random_hermitian(2, rng), random_hermitian(2, rng)
        freq = rng.uniform(0.5, 3.0)
        size = 10.0 ** rng.uniform(-4.0, 0.0)
        Us = [expm_hermitian(size * (K0 * np.sin(freq * s) + K1 * s / (2 * np.pi)), 1j)
              for s in curve.grid]
        gauged.append(bures_length_of_lift(gauge_lift(lift, Us), curve.grid))
    return {'parallel': parallel, 'gauged': gauged,
            'margin': float(min(gauged) - parallel)}


def berry_phase_check(n: int = 2000, eps: float = 1e-6, theta: float = np.pi / 2) -> dict:
    """Mixed transport of ``(1 - eps)|psi><psi| + eps I / 2`` against the pure-state lift."""
    phis = np.linspace(0.0, 2 * np.pi, n + 1)
    vectors = np.array([latitude_vector(theta, p) for p in phis])
    pure = pure_state_transport(vectors)

    def state(p):
        v = latitude_vector(theta, p)
        return mix_with_identity(np.outer(v, v.conj()), eps)

    mixed = transport(DensityCurve.from_function(state, phis))
    expected = -np.pi * (1 - np.cos(theta))
    return {'theta': theta, 'pure_phase': pure.phase, 'mixed_phase': mixed.phase,
            'solid_angle_phase': expected,
            'mixed_vs_pure': abs(wrap_angle(mixed.phase - pure.phase)),
            'pure_vs_formula': abs(wrap_angle(pure.phase - expected))}


def gauge_potential_check(resolutions=(100, 200, 400, 800), gauge_resolution: int = 400,
                          seed: int = 0) -> dict:
    """Scaling of the gauge potential of parallel lifts and the discrete gauge law.

    ``exponent`` is the log-log slope of ``max_k ||A_k||_max`` against the
    step size.  ``gauge_law_error`` compares the potential of a gauged lift
    ``W_k U_k`` with ``U^{-1} A U + U^{-1} dU/ds``, where ``dU/ds`` is a
    finite difference of the sampled gauge, relative to ``max |U^{-1} dU/ds|``.
    """
    from .linalg import expm_hermitian
    from .states import random_hermitian

    steps, norms = [], []
    for n in resolutions:
        curve = DensityCurve.from_function(reference_loop, np.linspace(0.0, 2 * np.pi, n + 1))
        A = gauge_potential(curve, transport(curve).amplitudes)
        steps.append(float(curve.grid[1] - curve.grid[0]))
        norms.append(float(np.abs(A).max()))
    exponent = float(np.polyfit(np.log(steps), np.log(norms), 1)[0])

    curve = DensityCurve.from_function(reference_loop,
                                       np.linspace(0.0, 2 * np.pi, gauge_resolution + 1))
    lift = transport(curve).amplitudes
    rng = np.random.default_rng(seed)
    K0, K1 = random_hermitian(2, rng), random_hermitian(2, rng)
    Us = np.stack([expm_hermitian(K0 * np.sin(s) + K1 * s / (2 * np.pi), 1j)
                   for s in curve.grid])
    U_inv = np.conj(np.swapaxes(Us, 1, 2))
    connection = U_inv @ np.gradient(Us, curve.grid, axis=0, edge_order=2)
    predicted = U_inv @ gauge_potential(curve, lift) @ Us + connection
    gauged = gauge_potential(curve, gauge_lift(lift, Us))
    error = float(np.abs(gauged - predicted).max() / np.abs(connection).max())
    return {'step_sizes': steps, 'max_norms': norms, 'exponent': exponent,
            'gauge_law_error': error}


def transport_suite(seed: int = 0, resolution: int = 100) -> SuiteReport:
    report = SuiteReport('transport')
    conv = transport_convergence(tuple(resolution * 2 ** k for k in range(4)))
    for key, values in conv['ratios'].items():
        for v in values:
            report.record(min(v - 3.5, 4.5 - v), 0.0, check=f'{key}_ratio', ratio=v)
    report.details['convergence_ratios'] = conv['ratios']
    mini = length_minimality(seed=seed)
    report.record(mini['margin'], 1e-9, check='length_minimality')
    report.details['length_minimality_margin'] = mini['margin']
    phase = berry_phase_check()
    report.record(1e-3 - phase['mixed_vs_pure'], 0.0, check='berry_phase_mixed')
    report.details['berry_phase'] = {k: v for k, v in phase.items()}
    gauge = gauge_potential_check(seed=seed)
    report.record(gauge['exponent'] - 1.8, 0.0, check='gauge_potential_exponent')
    report.record(1e-3 - gauge['gauge_law_error'], 0.0, check='gauge_law')
    report.details['gauge_potential'] = {k: gauge[k] for k in ('exponent', 'gauge_law_error')}
    return report


def run_suite(name: str, config: RunConfig | None = None, samples: int | None = None,
              dims=None, functionals=None) -> list[SuiteReport]:
    config = config or RunConfig()
    if name == 'all':
        return [r for suite in SUITES for r in run_suite(suite, config, samples, dims, functionals)]
    if name not in SUITES:
        raise UnknownSuite(f'unknown suite {name!r}; choose from {SUITES + ("all",)}')
    n = samples or config.samples
    tol = config.inequality_tol
    with warnings.catch_warnings():
        warnings.simplefilter('ignore')
        if name == 'monotonicity':
            return [monotonicity_suite(n, tuple(dims or (2, 3, 4)), config.seed, tol)]
        if name == 'concavity':
            return [concavity_suite(n, (dims or (3,))[0], seed=config.seed, tol=tol)]
        if name == 'bounds':
            return [bounds_suite(n, tuple(dims or (2, 3, 4)), config.seed, tol)]
        if name == 'functor':
            kwargs = {'functionals': tuple(functionals)} if functionals else {}
            return [functor_suite(samples=n, dims=tuple(dims or (2, 3)), seed=config.seed,
                                  tol=tol, **kwargs)]
        return [transport_suite(config.seed, max(config.resolution // 2, 50))]
