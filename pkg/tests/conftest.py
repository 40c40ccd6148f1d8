import pytest

from steerlab import criteria
from steerlab.criteria import Resolution


@pytest.fixture(scope="session")
def psub_table():
    """Photon-subtracted table at default resolution (several minutes)."""
    return {row.param: row for row in criteria.reproduce_table("psub")}


@pytest.fixture(scope="session")
def lg_table():
    return {row.param: row for row in criteria.reproduce_table("lg")}


@pytest.fixture(scope="session")
def psub_table_fast():
    return {row.param: row for row in criteria.reproduce_table("psub", Resolution(grid_n=61))}


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
