import json
import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def debian_text() -> bytes:
    return (FIXTURES / "debian_Packages").read_bytes()


@pytest.fixture(scope="session")
def bsd_text() -> bytes:
    return (FIXTURES / "bsd_INDEX").read_bytes()


@pytest.fixture(scope="session")
def debian_manifest() -> dict:
    return json.loads((FIXTURES / "debian_manifest.json").read_text())


@pytest.fixture(scope="session")
def bsd_manifest() -> dict:
    return json.loads((FIXTURES / "bsd_manifest.json").read_text())


_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request):
    """Record one acceptance line, print it, and fail the test when it did not pass.

    ``ok=None`` records an informational line that never fails.
    """
    lines = request.config.stash[_VERDICTS]

    def record(criterion: str, ok: bool | None, detail: str) -> None:
        tag = "INFO" if ok is None else ("PASS" if ok else "FAIL")
        line = f"{tag}  {criterion}: {detail}"
        lines.append(line)
        print(line)
        assert ok is not False, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
