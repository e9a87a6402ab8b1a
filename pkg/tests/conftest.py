import sys

import pytest

from elicitkit.distributions import BetaBelief, DiscreteBelief
from elicitkit.stylized import B1, B2


@pytest.fixture
def b1() -> DiscreteBelief:
    return B1


@pytest.fixture
def b2() -> DiscreteBelief:
    return B2


@pytest.fixture
def fig1() -> BetaBelief:
    return BetaBelief(1.5, 4.0)



def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
