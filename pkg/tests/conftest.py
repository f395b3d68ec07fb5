import pytest
from hypothesis import HealthCheck, settings

from wirtinger_g2.multivalued import BranchConfig
from wirtinger_g2.params import as_float, fixture_exponents
from wirtinger_g2.quadrature import QuadratureSpec

settings.register_profile(
    "default",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

FIXTURE_Z = (0.2, 0.45, 0.7)


@pytest.fixture
def v_exact():
    return fixture_exponents()


@pytest.fixture
def v():
    return as_float(fixture_exponents())


@pytest.fixture
def cfg():
    return BranchConfig(*FIXTURE_Z)


@pytest.fixture
def q():
    return QuadratureSpec(tol=1e-12)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
