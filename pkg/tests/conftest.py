import pytest

from doubleoctic.arrangement import load_arrangements
from doubleoctic.golden import load_golden
from doubleoctic.modular import l_values, load_forms
from doubleoctic.cli import DATA

# filled by the acceptance tests and echoed after the run
ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def arrangements():
    return {a.label: a for a in load_arrangements(DATA / "arrangements.txt")}


@pytest.fixture(scope="session")
def golden():
    return load_golden()


@pytest.fixture(scope="session")
def forms():
    return load_forms()


@pytest.fixture(scope="session")
def lvalues(forms):
    return {name: l_values(f, 35) for name, f in forms.items()}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: s.split("criterion ")[1]):
            terminalreporter.write_line(line)
