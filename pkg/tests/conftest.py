import pytest
from hypothesis import settings

from tintinnabuli import SummaConfig, assemble
from tintinnabuli.pitchspace import PitchSpace, minor_triad, natural_minor

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def M():
    return PitchSpace(natural_minor("E4"))


@pytest.fixture(scope="session")
def T():
    return PitchSpace(minor_triad("E4"))


@pytest.fixture(scope="session")
def default_score():
    return assemble(SummaConfig())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
