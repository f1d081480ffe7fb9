"""Acceptance criteria, each at its stated tolerance."""

import itertools
import time
import warnings

import numpy as np

from bures_kit.fidelity import fidelity, fidelity_via_geometric_mean, transition_probability
from bures_kit.purification import max_overlap
from bures_kit.states import random_density, random_pure_vector, spawn
from bures_kit.transport import pure_state_transport
from bures_kit.variational import inf_sum, optimal_witness, sum_objective
from bures_kit.verify import (berry_phase_check, bounds_suite, concavity_suite,
                              gauge_potential_check, latitude_vector, length_minimality,
                              monotonicity_suite, transport_convergence, wrap_angle)


def test_route_equivalence(acceptance):
    start = time.perf_counter()
    worst_closed = worst_all = 0.0
    for d, rng in zip((2, 3, 4, 6), spawn(2024, 4)):
        for _ in range(100):
            r1, r2 = random_density(d, rng), random_density(d, rng)
            with warnings.catch_warnings():
                warnings.simplefilter('error')
                values = {
                    'closed': fidelity(r1, r2).fidelity,
                    'gmean': fidelity_via_geometric_mean(r1, r2).fidelity,
                    'variational': inf_sum(r1, r2).value,
                    'purification': float(np.sqrt(max_overlap(r1, r2).value)),
                }
            worst_closed = max(worst_closed, abs(values['closed'] - values['gmean']))
            worst_all = max(worst_all, max(abs(a - b) for a, b in
                                           itertools.combinations(values.values(), 2)))
    elapsed = time.perf_counter() - start
    ok = worst_closed <= 1e-8 and worst_all <= 1e-6 and elapsed < 120
    acceptance('route equivalence', ok,
               f'closed-form gap {worst_closed:.2e} (tol 1e-8), all-route gap {worst_all:.2e} '
               f'(tol 1e-6), {elapsed:.1f} s (limit 120 s)')


def test_pure_state_reduction(acceptance):
    rng = np.random.default_rng(7)
    worst = 0.0
    for i in range(100):
        d = 2 + i % 5
        v1, v2 = random_pure_vector(d, rng), random_pure_vector(d, rng)
        p1, p2 = np.outer(v1, v1.conj()), np.outer(v2, v2.conj())
        worst = max(worst, abs(transition_probability(p1, p2) - np.trace(p1 @ p2).real))
    acceptance('pure-state reduction', worst <= 1e-10, f'max |F^2 - Tr p1 p2| = {worst:.2e} (tol 1e-10)')


def test_monotonicity(acceptance):
    rep = monotonicity_suite(samples=1000, dims=(2, 3, 4), seed=11, tol=1e-9)
    acceptance('monotonicity', rep.passed and rep.checks == 3000,
               f'{rep.checks} triples (channel / transpose / partial trace), '
               f'{rep.failures} violations, worst slack {rep.worst_slack:.2e} (tol 1e-9)')


def test_bounds(acceptance):
    rep = bounds_suite(samples=200, seed=13, tol=1e-9)
    acceptance('bounds', rep.passed,
               f'{rep.checks} checks, {rep.failures} violations, worst slack '
               f'{rep.worst_slack:.2e}, scaling residual '
               f"{rep.details['worst_scaling_residual']:.2e} (tol 1e-9)")


def test_concavity(acceptance):
    rep = concavity_suite(samples=200, seed=17, tol=1e-9)
    gap = rep.details['block_equality_gap']
    acceptance('concavity', rep.passed and gap <= 1e-9,
               f'{rep.checks - 1} mixtures, {rep.failures} violations, '
               f'block equality gap {gap:.2e} (tol 1e-9)')


def test_witness_saturation(acceptance):
    rng = np.random.default_rng(19)
    worst = 0.0
    for i in range(100):
        d = (2, 3, 4, 6)[i % 4]
        r1, r2 = random_density(d, rng), random_density(d, rng)
        A = optimal_witness(r1, r2)
        worst = max(worst, abs(sum_objective(r1, r2, A) - fidelity(r1, r2).fidelity))
    acceptance('witness saturation', worst <= 1e-8, f'max |objective(A*) - F| = {worst:.2e} (tol 1e-8)')


def test_transport_convergence(acceptance):
    conv = transport_convergence((100, 200, 400, 800))
    ratios = conv['ratios']
    ok = all(3.5 <= r <= 4.5 for values in ratios.values() for r in values)
    detail = '; '.join(f"{k} {', '.join(f'{r:.3f}' for r in v)}" for k, v in ratios.items())
    acceptance('transport convergence', ok, f'halving ratios: {detail} (band [3.5, 4.5])')


def test_length_minimality(acceptance):
    out = length_minimality(n=200, gauges=20, seed=23)
    acceptance('length minimality', out['margin'] >= -1e-9,
               f"parallel {out['parallel']:.6f}, min gauged {min(out['gauged']):.6f}, "
               f"margin {out['margin']:.2e} (>= -1e-9)")


def test_berry_phase(acceptance):
    mixed = [berry_phase_check(n=2000, eps=1e-6, theta=theta)['mixed_vs_pure']
             for theta in (np.pi / 2, np.pi / 3)]
    phis = np.linspace(0.0, 2 * np.pi, 2001)
    latitude_errors = []
    for theta in (np.pi / 4, np.pi / 2, 2 * np.pi / 3):
        pure = pure_state_transport([latitude_vector(theta, p) for p in phis])
        latitude_errors.append(abs(wrap_angle(pure.phase + np.pi * (1 - np.cos(theta)))))
    ok = max(mixed) <= 1e-3 and max(latitude_errors) <= 1e-4
    acceptance('pure-state phase oracle', ok,
               f'mixed vs pure {mixed[0]:.2e} rad on the great circle, {mixed[1]:.2e} rad at '
               f'theta = pi/3 (tol 1e-3); pure vs -solid angle/2 on three latitudes '
               f'{max(latitude_errors):.2e} rad (tol 1e-4)')


def test_gauge_potential(acceptance):
    out = gauge_potential_check()
    ok = out['exponent'] >= 1.8 and out['gauge_law_error'] <= 1e-3
    acceptance('gauge potential', ok,
               f"fit exponent {out['exponent']:.3f} (>= 1.8), gauge-law relative error "
               f"{out['gauge_law_error']:.2e} (tol 1e-3)")
