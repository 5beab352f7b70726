import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from criteria import RESULTS  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, 12):
        verdict, detail = RESULTS.get(k, ("NOT RUN", ""))
        terminalreporter.write_line(f"criterion {k:>2}: {verdict} {detail}".rstrip())


@lru_cache(maxsize=None)
def cached_tower(n, d, p, m_max):
    from zipstrata.finitezip import orbit_tower

    return orbit_tower(n, d, p, m_max)


@pytest.fixture(scope="session")
def tower():
    return cached_tower
