import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# lines recorded by test_acceptance.report, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
