import numpy as np
import pytest

from bures_kit.transport import DensityCurve


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def commuting_p(s):
    return 0.5 + 0.3 * np.sin(s)


@pytest.fixture
def commuting_curve():
    """``diag(p, 1 - p)`` on ``[0, 1]`` with its exact Bures length.

    ``p`` increases on the interval, so ``int pdot / (2 sqrt(p(1-p))) ds``
    equals ``(arcsin(2p - 1)) / 2`` between the end points.
    """
    grid = np.linspace(0.0, 1.0, 401)
    curve = DensityCurve.from_function(
        lambda s: np.diag([commuting_p(s), 1 - commuting_p(s)]).astype(complex), grid)
    p0, p1 = commuting_p(0.0), commuting_p(1.0)
    exact = 0.5 * (np.arcsin(2 * p1 - 1) - np.arcsin(2 * p0 - 1))
    return curve, float(exact)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance(capsys):
    """Record and print one PASS/FAIL line per acceptance criterion."""
    def record(name: str, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print('\n' + line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section('acceptance criteria')
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
