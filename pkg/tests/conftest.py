import pytest

from rulestatus import fixtures
from rulestatus.status import assess


@pytest.fixture(scope="session")
def muddy_trace():
    return fixtures.muddy_yard_trace()


@pytest.fixture(scope="session")
def muddy_rules():
    return fixtures.muddy_yard_rules()


@pytest.fixture(scope="session")
def muddy_tables(muddy_rules, muddy_trace):
    return [assess(rule, muddy_trace) for rule in muddy_rules]


@pytest.fixture(scope="session")
def av_tables():
    rules = fixtures.av_rules()
    return {trip: [assess(r, fixtures.av_trace(trip)) for r in rules] for trip in (1, 2, 3)}


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
