import pytest

# criterion label -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def record(label, passed, detail=""):
    ACCEPTANCE[label] = (bool(passed), detail)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
