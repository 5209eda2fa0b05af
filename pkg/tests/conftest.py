import pytest
from hypothesis import HealthCheck, settings

from betafreq.orbit import available_backends

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_RESULTS = []


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(ACCEPTANCE_RESULTS, key=lambda r: r.number):
        terminalreporter.write_line(r.line())
