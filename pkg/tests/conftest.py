"""Shared test plumbing: the acceptance-criteria scoreboard printed at
the end of the run, one line per criterion."""

import pytest

_RESULTS: dict = {}


def record_criterion(num: int, desc: str, passed: bool, detail: str = "") -> None:
    _RESULTS[num] = (desc, passed, detail)


class criterion:
    """Context manager for acceptance tests: records PASS on clean exit,
    FAIL with the error on any exception, then lets pytest see it."""

    def __init__(self, num: int, desc: str):
        self.num = num
        self.desc = desc
        self.detail = ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            record_criterion(self.num, self.desc, True, self.detail)
        else:
            record_criterion(self.num, self.desc, False, f"{exc_type.__name__}: {exc}")
        return False


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_RESULTS):
        desc, passed, detail = _RESULTS[num]
        tag = "PASS" if passed else "FAIL"
        line = f"criterion {num:>2}: {tag}  {desc}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def backend_name():
    from xpand import kernels

    return kernels.BACKEND
