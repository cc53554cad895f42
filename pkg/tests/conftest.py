import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# filled by test_acceptance.py, one entry per criterion
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        verdict, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {verdict}  {text}")
