import numpy as np
import pytest

from bures_kit.channels import (FUNCTIONALS, KrausChannel, PositiveMap, adjoint, apply,
                                choi_inequality_check, depolarizing_channel,
                                functor_conditions_check, identity_channel, monotonicity_check,
                                partial_trace_channel, random_cptp, unitary_channel)
from bures_kit.errors import DimensionMismatch, NotTracePreserving, SingularOperator
from bures_kit.fidelity import fidelity
from bures_kit.purification import partial_trace
from bures_kit.states import random_density, random_hermitian, random_positive, random_unitary


def test_identity_and_depolarizing(rng):
    rho = random_density(2, rng)
    assert np.allclose(apply(identity_channel(2), rho), rho)
    assert np.allclose(apply(depolarizing_channel(2), rho), np.eye(2) / 2)
    half = depolarizing_channel(3, 0.5)
    r3 = random_density(3, rng)
    assert np.allclose(half(r3), 0.5 * r3 + 0.5 * np.eye(3) / 3)


def test_random_channel_output_is_state(rng):
    for d_in, d_out, k in [(2, 2, 1), (3, 2, 4), (2, 4, 3)]:
        phi = random_cptp(d_in, d_out, k, rng)
        assert phi.completeness_defect <= 1e-10
        out = phi(random_density(d_in, rng))
        assert out.shape == (d_out, d_out)
        assert abs(np.trace(out).real - 1) <= 1e-9
        assert np.linalg.eigvalsh(out)[0] >= -1e-12


def test_single_kraus_is_unitary(rng):
    K = random_cptp(3, 3, 1, rng).kraus_ops[0]
    assert np.abs(K @ K.conj().T - np.eye(3)).max() < 1e-10


def test_seed_determinism():
    a, b = random_cptp(3, 2, 4, seed=11), random_cptp(3, 2, 4, seed=11)
    assert np.array_equal(a.kraus_ops, b.kraus_ops)


def test_rejects_non_trace_preserving():
    with pytest.raises(NotTracePreserving):
        KrausChannel(np.eye(2)[None] * 0.5)
    with pytest.raises(DimensionMismatch):
        identity_channel(2)(np.eye(3) / 3)


def test_adjoint(rng):
    U = random_unitary(3, rng)
    A = random_hermitian(3, rng)
    assert np.allclose(adjoint(unitary_channel(U))(A), U.conj().T @ A @ U)
    phi = random_cptp(3, 2, 3, rng)
    psi = phi.adjoint()
    assert np.abs(psi(np.eye(2)) - np.eye(3)).max() < 1e-9
    for _ in range(10):
        rho, B = random_density(3, rng), random_hermitian(2, rng)
        assert abs(np.trace(phi(rho) @ B) - np.trace(rho @ psi(B))) < 1e-10


def test_partial_trace_channel_matches_einsum(rng):
    rho = random_density(6, rng)
    for keep in (0, 1):
        assert np.allclose(partial_trace_channel((3, 2), keep)(rho),
                           partial_trace(rho, (3, 2), keep))


def test_positive_map_transposes_and_has_dual(rng):
    phi = PositiveMap(identity_channel(2))
    rho = random_density(2, rng)
    assert np.allclose(phi(rho), rho.T)
    psi = PositiveMap(random_cptp(2, 2, 2, rng))
    B = random_hermitian(2, rng)
    assert abs(np.trace(psi(rho) @ B) - np.trace(rho @ psi.adjoint()(B))) < 1e-10


def test_choi_inequality(rng):
    A = random_positive(3, rng)
    c = choi_inequality_check(lambda X: X, A)
    assert c.holds and abs(c.lhs) < 1e-9
    psi = random_cptp(3, 3, 2, rng).adjoint()
    c = choi_inequality_check(psi, np.eye(3))
    assert c.holds and abs(c.lhs) < 1e-9
    for _ in range(50):
        psi = random_cptp(3, int(rng.integers(2, 5)), int(rng.integers(1, 5)), rng).adjoint()
        d_out = psi.channel.dim_out
        assert choi_inequality_check(psi, random_positive(d_out, rng)).holds
    with pytest.raises(SingularOperator):
        choi_inequality_check(lambda X: X, np.diag([1.0, 0.0]))


def test_monotonicity_examples(rng):
    r1, r2 = random_density(2, rng), random_density(2, rng)
    c = monotonicity_check(r1, r2, depolarizing_channel(2))
    assert c.after == pytest.approx(1.0) and c.holds
    c = monotonicity_check(r1, r2, unitary_channel(random_unitary(2, rng)))
    assert abs(c.after - c.before) < 1e-10
    sigma = random_density(2, rng)
    c = monotonicity_check(np.kron(r1, sigma), np.kron(r2, random_density(2, rng)),
                           partial_trace_channel((2, 2), 0))
    assert c.holds


def test_monotonicity_sweep(rng):
    for i in range(150):
        d = 2 + i % 3
        r1, r2 = random_density(d, rng), random_density(d, rng)
        phi = random_cptp(d, d, int(rng.integers(1, d * d + 1)), rng)
        if i % 2:
            phi = PositiveMap(phi)
        assert monotonicity_check(r1, r2, phi).holds


@pytest.mark.parametrize('name', ['fidelity_squared', 'power_trace', 'trace_norm_quarter'])
def test_admissible_functionals_pass(name):
    rep = functor_conditions_check(FUNCTIONALS[name], samples=30, seed=1, name=name)
    assert rep.passed, rep.violations


def test_trace_product_control_fails_pure_condition():
    rep = functor_conditions_check(FUNCTIONALS['trace_product'], samples=30, seed=1)
    assert not rep.condition_passed('pure')
    assert rep.condition_passed('monotone') and rep.condition_passed('dominates')
    v = rep.violations['pure'][0]
    assert {'dim', 'sample', 'slack'} <= set(v)


def test_fidelity_squared_is_transition_probability(rng):
    r1, r2 = random_density(3, rng), random_density(3, rng)
    assert FUNCTIONALS['fidelity_squared'](r1, r2) == pytest.approx(
        fidelity(r1, r2).transition_probability)
