import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings, strategies as st

from bures_kit.errors import DimensionMismatch, DomainError, NonPositiveScale
from bures_kit.fidelity import (bound_power_mean, bound_trace_norm, fidelity,
                                fidelity_trace_norm, fidelity_via_geometric_mean,
                                geometric_mean, geometric_mean_quasi,
                                scaled_transition_probability, transition_probability)
from bures_kit.linalg import kron, quasi_inverse, support_projector
from bures_kit.states import random_density, random_positive, random_pure, random_pure_vector

KET0 = np.diag([1.0, 0.0]).astype(complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)
seeds = st.integers(0, 2**32 - 1)


def scipy_fidelity(r1, r2):
    s = sla.sqrtm(r1)
    return float(np.trace(sla.sqrtm(s @ r2 @ s)).real)


def test_self_fidelity_is_trace(rng):
    rho = random_density(3, rng)
    assert fidelity(rho, rho).fidelity == pytest.approx(1.0, abs=1e-12)
    w = random_positive(3, rng)
    assert fidelity(w, w).fidelity == pytest.approx(np.trace(w).real, rel=1e-12)


def test_ket0_plus():
    rep = fidelity(KET0, PLUS)
    assert rep.fidelity == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert rep.transition_probability == pytest.approx(0.5, abs=1e-12)
    assert rep.method == 'closed_form'


def test_commuting_closed_form():
    F = fidelity(np.diag([0.5, 0.5]), np.diag([0.9, 0.1])).fidelity
    assert F == pytest.approx(np.sqrt(0.45) + np.sqrt(0.05), abs=1e-12)
    assert F == pytest.approx(0.8944272, abs=1e-7)


def test_against_scipy(rng):
    for d in (2, 3, 5):
        r1, r2 = random_density(d, rng), random_density(d, rng)
        assert fidelity(r1, r2).fidelity == pytest.approx(scipy_fidelity(r1, r2), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 6))
def test_symmetry_and_trace_norm_identity(seed, d):
    rng = np.random.default_rng(seed)
    r1, r2 = random_density(d, rng), random_density(d, rng)
    F = fidelity(r1, r2).fidelity
    assert abs(F - fidelity(r2, r1).fidelity) <= 1e-9
    assert abs(F - fidelity_trace_norm(r1, r2)) <= 1e-9
    assert 0.0 <= F <= 1.0 + 1e-12


def test_pure_reduction(rng):
    for _ in range(20):
        v1, v2 = random_pure_vector(3, rng), random_pure_vector(3, rng)
        p1, p2 = np.outer(v1, v1.conj()), np.outer(v2, v2.conj())
        assert abs(transition_probability(p1, p2) - abs(np.vdot(v1, v2)) ** 2) <= 1e-10


def test_multiplicativity(rng):
    for _ in range(10):
        a1, a2, b1, b2 = (random_density(2, rng) for _ in range(4))
        lhs = fidelity(kron(a1, b1), kron(a2, b2)).fidelity
        assert lhs == pytest.approx(fidelity(a1, a2).fidelity * fidelity(b1, b2).fidelity,
                                    abs=1e-9)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        fidelity(np.eye(2) / 2, np.eye(3) / 3)


def test_geometric_mean_examples(rng):
    assert np.allclose(geometric_mean(np.diag([4.0, 1.0]), np.diag([1.0, 4.0])), 2 * np.eye(2))
    w = random_positive(3, rng)
    assert np.abs(geometric_mean(w, w) - w).max() < 1e-10


def test_geometric_mean_symmetric_and_riccati(rng):
    w, r = random_positive(4, rng), random_positive(4, rng)
    M = geometric_mean(w, r)
    assert np.abs(M - geometric_mean(r, w)).max() < 1e-9 * np.abs(M).max()
    # X = w # r solves X r^{-1} X = w
    assert np.abs(M @ np.linalg.inv(r) @ M - w).max() < 1e-8 * np.abs(w).max()
    assert np.abs(M - sla.sqrtm(w @ np.linalg.inv(r)) @ r).max() < 1e-8 * np.abs(M).max()


def test_geometric_mean_quasi_examples(rng):
    rho = random_density(3, rng)
    assert np.abs(geometric_mean_quasi(rho, rho) - np.eye(3)).max() < 1e-9
    p, q = np.array([0.2, 0.8]), np.array([0.6, 0.4])
    assert np.allclose(geometric_mean_quasi(np.diag(q), np.diag(p)), np.diag(np.sqrt(q / p)))
    singular = np.diag([1.0, 0.0])
    assert np.allclose(geometric_mean_quasi(singular, singular), support_projector(singular))


def test_geometric_mean_quasi_solves_riccati(rng):
    w, r = random_density(3, rng), random_density(3, rng)
    M = geometric_mean_quasi(w, r)
    assert np.abs(M @ r @ M - w).max() < 1e-8
    assert np.abs(M - geometric_mean(w, quasi_inverse(r))).max() < 1e-8


def test_geometric_route_examples(rng):
    rho = random_density(3, rng)
    assert fidelity_via_geometric_mean(rho, rho).fidelity == pytest.approx(1.0, abs=1e-10)
    ket1 = np.diag([0.0, 1.0])
    assert fidelity_via_geometric_mean(KET0, ket1).fidelity == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize('d', [2, 3])
def test_geometric_route_matches_closed_form(rng, d):
    for _ in range(50):
        r1, r2 = random_density(d, rng), random_density(d, rng)
        assert abs(fidelity_via_geometric_mean(r1, r2).fidelity
                   - fidelity(r1, r2).fidelity) <= 1e-8


def test_geometric_route_singular_first_argument(rng):
    for rank in (1, 2):
        r1, r2 = random_density(4, rng, rank=rank), random_density(4, rng)
        assert abs(fidelity_via_geometric_mean(r1, r2).fidelity
                   - fidelity(r1, r2).fidelity) <= 1e-8


def test_scaling_law(rng):
    w1, w2 = random_positive(3, rng), random_positive(3, rng)
    pr = transition_probability(w1, w2)
    assert scaled_transition_probability(w1, 1.0, w2, 1.0) == pytest.approx(pr, abs=1e-12)
    assert abs(scaled_transition_probability(w1, 4.0, w2, 9.0) - 36 * pr) <= 1e-9 * 36
    with pytest.raises(NonPositiveScale):
        scaled_transition_probability(w1, 0.0, w2, 1.0)


def test_power_mean_examples(rng):
    rho = random_density(3, rng)
    b = bound_power_mean(rho, rho, 0.5)
    assert b.lhs == pytest.approx(1.0) and b.rhs == pytest.approx(1.0) and b.holds
    b = bound_power_mean(KET0, np.diag([0.0, 1.0]), 0.3)
    assert b.lhs == pytest.approx(0.0, abs=1e-15) and b.rhs == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        bound_power_mean(rho, rho, 1.5)


def test_power_mean_endpoints(rng):
    w1, w2 = random_positive(3, rng), random_positive(3, rng)
    for s in (0.0, 1.0):
        b = bound_power_mean(w1, w2, s)
        assert b.holds
        assert b.lhs == pytest.approx(np.trace(w1).real * np.trace(w2).real, rel=1e-9)


def test_trace_norm_bound_examples(rng):
    b = bound_trace_norm(KET0, np.diag([0.0, 1.0]))
    assert b.lhs == pytest.approx(0.0, abs=1e-14) and b.rhs == pytest.approx(0.0, abs=1e-14)
    rho = random_density(3, rng)
    b = bound_trace_norm(rho, rho)
    assert b.lhs == pytest.approx(4.0) and b.rhs == pytest.approx(4.0) and b.holds


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 5))
def test_bounds_hold_on_random_pairs(seed, d):
    rng = np.random.default_rng(seed)
    w1, w2 = random_positive(d, rng), random_positive(d, rng)
    assert bound_trace_norm(w1, w2).holds
    for s in np.linspace(0.1, 0.9, 9):
        assert bound_power_mean(w1, w2, s).holds


def test_pure_inputs_accept_random_pure(rng):
    p1, p2 = random_pure(4, rng), random_pure(4, rng)
    assert abs(transition_probability(p1, p2) - np.trace(p1 @ p2).real) <= 1e-10
