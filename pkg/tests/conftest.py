import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("esq", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("esq")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = []


@pytest.fixture
def accept():
    """Record one acceptance line; the lines are repeated in the terminal summary."""
    def _record(name: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
