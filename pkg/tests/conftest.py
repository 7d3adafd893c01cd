import pytest

# criterion id -> list of (description, passed); filled by test_acceptance
ACCEPTANCE_RESULTS = {}


def record(criterion, description, passed):
    ACCEPTANCE_RESULTS.setdefault(criterion, []).append((description, bool(passed)))
    return passed


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE_RESULTS, key=lambda c: int(c[2:])):
        for description, passed in ACCEPTANCE_RESULTS[criterion]:
            terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {criterion}  {description}")
