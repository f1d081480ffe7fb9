import numpy as np
import pytest

from bures_kit.config import RunConfig
from bures_kit.errors import UnknownSuite
from bures_kit.verify import (berry_phase_check, bounds_suite, concavity_suite, functor_suite,
                              length_minimality, monotonicity_suite, run_suite,
                              transport_convergence)


def test_monotonicity_suite_covers_all_families():
    rep = monotonicity_suite(samples=30, dims=(2, 3), seed=1)
    assert rep.checks == 60 and rep.passed


def test_concavity_suite():
    rep = concavity_suite(samples=20, seed=1)
    assert rep.passed and rep.details['block_equality_gap'] <= 1e-9


def test_bounds_suite():
    rep = bounds_suite(samples=20, seed=1)
    assert rep.passed and rep.details['worst_scaling_residual'] <= 1e-9


def test_functor_suite_reports_unknown():
    with pytest.raises(UnknownSuite):
        functor_suite(functionals=('nope',), samples=2)


def test_run_suite_names():
    with pytest.raises(UnknownSuite):
        run_suite('nope')
    reports = run_suite('bounds', RunConfig(seed=5), samples=5)
    assert [r.name for r in reports] == ['bounds']


def test_reports_are_deterministic():
    a = run_suite('concavity', RunConfig(seed=42), samples=10)[0].to_dict()
    b = run_suite('concavity', RunConfig(seed=42), samples=10)[0].to_dict()
    assert a == b


def test_transport_convergence_small():
    conv = transport_convergence((50, 100, 200))
    for values in conv['ratios'].values():
        assert all(3.5 <= v <= 4.5 for v in values)


def test_length_minimality_small():
    assert length_minimality(n=100, gauges=5)['margin'] >= -1e-9


def test_berry_phase_small():
    out = berry_phase_check(n=500)
    assert out['mixed_vs_pure'] < 1e-2
    assert abs(out['solid_angle_phase'] + np.pi) < 1e-15
