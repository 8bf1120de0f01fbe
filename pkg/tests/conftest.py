import pytest

ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one acceptance line: ``report(n, ok, detail)``."""
    def record(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        ACCEPTANCE.append((n, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE, key=lambda item: item[0]):
            terminalreporter.write_line(line)
