import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

CRITERIA: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
