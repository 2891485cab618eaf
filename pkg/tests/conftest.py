import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "cuweb",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cuweb")


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    """Append one summary line per acceptance criterion."""

    def _record(label: str, passed: bool, seconds: float, detail: str) -> None:
        ACCEPTANCE.append(f"{'PASS' if passed else 'FAIL'}  {label:<28} {seconds:7.2f}s  {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
