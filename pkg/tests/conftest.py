from __future__ import annotations

import pytest

_RESULTS = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """record(number, title, ok, detail) stores one acceptance line."""
    results = request.config.stash.setdefault(_RESULTS, {})

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        results[number] = (title, ok, detail)
        print(_line(number, title, ok, detail))
        return ok

    return record


def _line(number, title, ok, detail):
    return f"AC{number} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(_line(number, *results[number]))
