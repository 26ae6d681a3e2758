import pytest

from dedekind.engines import KernelContext
from dedekind.intervals import lattice


@pytest.fixture(scope="session")
def ctx():
    """Kernel contexts by base arity, built once per session."""
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = KernelContext.build(n)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def d6():
    return lattice(6)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
