import sys


def pytest_terminal_summary(terminalreporter):
    lines = getattr(sys.modules.get("test_acceptance"), "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
