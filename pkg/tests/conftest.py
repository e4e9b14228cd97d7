import json
import pathlib

import pytest

ORACLES = json.loads((pathlib.Path(__file__).parent / "oracles.json").read_text())
# criterion number -> (passed, detail), filled by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def oracles():
    return ORACLES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
