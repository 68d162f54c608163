import pytest

# filled by tests/test_acceptance.py, one entry per criterion
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record_criterion():
    def record(num: int, ok: bool, detail: str) -> None:
        ACCEPTANCE[num] = (ok, detail)
        print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    return record
