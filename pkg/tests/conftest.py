import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pncmaps.constellation import PskConfig  # noqa: E402
from pncmaps.mapbook import assemble  # noqa: E402

_BOOKS = {}


def book_for(m):
    if m not in _BOOKS:
        _BOOKS[m] = assemble(PskConfig(m))
    return _BOOKS[m]


@pytest.fixture(scope="session")
def book4():
    return book_for(4)


@pytest.fixture(scope="session")
def book8():
    return book_for(8)


@pytest.fixture(scope="session")
def book2():
    return book_for(2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
