import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from elmkit.reproduce import default_data_dir  # noqa: E402


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return default_data_dir()


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config.acceptance_lines

    def record(number: int, summary: str, check):
        try:
            detail = check()
        except BaseException as exc:
            line = f"criterion {number}: FAIL  {summary}  ({type(exc).__name__}: {exc})"
            lines.append(line)
            print(line)
            raise
        line = f"criterion {number}: PASS  {summary}" + (f"  ({detail})" if detail else "")
        lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(config.acceptance_lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
