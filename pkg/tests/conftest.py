import pytest


class AcceptanceLog:
    def __init__(self):
        self.lines = {}
        self.status = {}

    def record(self, criterion, passed, detail):
        self.status[criterion] = passed
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        self.lines[criterion] = line
        print(line)
        return passed

    def property_status(self):
        parts = []
        for c in (6, 7, 8):
            state = self.status.get(c)
            parts.append(f"{c}={'not run' if state is None else ('pass' if state else 'FAIL')}")
        return "property suites: " + ", ".join(parts)


_LOG = AcceptanceLog()


@pytest.fixture(scope="session")
def acceptance_log():
    return _LOG


def pytest_terminal_summary(terminalreporter):
    if not _LOG.lines:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(_LOG.lines):
        terminalreporter.write_line(_LOG.lines[c])
