import pytest
from hypothesis import settings

from wachlog.padic import PrecisionProfile

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture(scope="session")
def small():
    return PrecisionProfile(20, 100, 32)


@pytest.fixture(scope="session")
def standard():
    return PrecisionProfile(20, 200, 32)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
