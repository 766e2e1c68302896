from importlib import resources

import pytest


def fixture_path(name: str) -> str:
    return str(resources.files("syscons").joinpath(f"fixtures/{name}"))


@pytest.fixture
def fixtures():
    return fixture_path


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
