import numpy as np
import pytest

from adiabatic_fock import build_h_initial, build_h_problem_diag, make_space

SMITH_T = 13.3444
SMITH_DIAG = (2, 4, 5, 3, 1)


@pytest.fixture(scope="session")
def smith_space():
    return make_space(1, [5], "rigid")


@pytest.fixture(scope="session")
def smith_hp(smith_space):
    return build_h_problem_diag(smith_space, SMITH_DIAG)


@pytest.fixture(scope="session")
def smith_hi(smith_space):
    return build_h_initial(smith_space, 1.0, shifted=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240615)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line, then assert it."""
    results = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def check(label: str, ok: bool, detail: str = ""):
        results.append((label, bool(ok), detail))
        assert ok, f"{label}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE_KEY, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in results:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}  {detail}")
