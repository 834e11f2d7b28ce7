import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# acceptance criteria record (number, passed, detail) here for the summary lines
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
