import sys

import pytest

from sta_otto.engine import BathPair, CycleConfig

# omega1, omega2, beta1, beta2 of the reference efficiency/power curves
REFERENCE = dict(omega1=0.32, omega2=1.0, beta1=0.5, beta2=0.05)


@pytest.fixture
def baths():
    return BathPair(REFERENCE["beta1"], REFERENCE["beta2"])


@pytest.fixture
def make_config(baths):
    def factory(tau, method="AD", **kw):
        return CycleConfig(REFERENCE["omega1"], REFERENCE["omega2"], baths, tau, method, **kw)
    return factory


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.report_line(number))
