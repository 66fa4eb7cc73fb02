import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
    missing = [k for k in range(1, 9) if k not in lines]
    for k in missing:
        terminalreporter.write_line(f"FAIL  criterion {k}: not run or raised before reporting")
