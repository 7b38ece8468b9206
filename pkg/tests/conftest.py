import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile(
    "thorough", max_examples=500, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(os.environ.get("MUDIS_HYPOTHESIS_PROFILE", "default"))

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CORPUS = os.path.join(ROOT, "corpus")


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS


@pytest.fixture(scope="session")
def corpus_formulas():
    from mudis.cli import corpus_files, load_formula
    return [(os.path.basename(p), load_formula(p)) for p in corpus_files(CORPUS)]


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record the one-line verdict of an acceptance criterion."""
    def record(number, title, ok, detail):
        line = "criterion %d %-28s %s  %s" % (number, title, "PASS" if ok else "FAIL", detail)
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
