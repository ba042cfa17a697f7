import sys
from pathlib import Path

import pytest

from oalg import catalog

sys.path.insert(0, str(Path(__file__).parent))

OA_NAMES = [e.name for e in catalog.orthoalgebras()]
SMALL_OA = [n for n in OA_NAMES if catalog.get(n).table().size <= 24]


@pytest.fixture(scope="session")
def tables():
    return {name: catalog.get(name).table() for name in catalog.names()}


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
