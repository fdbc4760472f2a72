import pytest

from longsafe.core import EnvironmentParams, KinematicState, PairSample

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def make_sample(x_L=0.0, v_L=0.0, a_L=0.0, x_F=0.0, v_F=0.0, a_F=0.0, t=0.0):
    return PairSample(t, KinematicState(x_L, v_L, a_L), KinematicState(x_F, v_F, a_F))


def with_gap(d, l_V=4.6, x_F=0.0, **kw):
    """Sample whose effective distance is ``d``."""
    return make_sample(x_L=x_F + l_V + d, x_F=x_F, **kw)


@pytest.fixture
def env():
    return EnvironmentParams()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
