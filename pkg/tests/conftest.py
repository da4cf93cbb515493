import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    outcomes = getattr(mod, "OUTCOMES", None)
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(outcomes):
        terminalreporter.write_line(outcomes[k])
