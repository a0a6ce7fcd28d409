import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


ACCEPTANCE: list[str] = []


class _Criterion:
    def __init__(self, number: int, title: str, capsys):
        self.number, self.title, self.capsys = number, title, capsys
        self.details: list[str] = []

    def note(self, text: str) -> None:
        self.details.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = "; ".join(self.details)
        if exc is not None and not isinstance(exc, AssertionError):
            detail = f"{detail}; error: {exc!r}" if detail else f"error: {exc!r}"
        line = f"[{status}] criterion {self.number:>2}: {self.title}" + (f" ({detail})" if detail else "")
        ACCEPTANCE.append(line)
        with self.capsys.disabled():
            print("\n" + line, flush=True)
        return False


@pytest.fixture
def criterion(capsys):
    return lambda number, title: _Criterion(number, title, capsys)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
