import numpy as np
import pytest

from symdec.codes import build_repetition_code, build_surface_code, build_toric_code, build_xzzx_code


@pytest.fixture(scope="session")
def surface3():
    return build_surface_code(3)


@pytest.fixture(scope="session")
def surface5():
    return build_surface_code(5)


@pytest.fixture(scope="session")
def xzzx5():
    return build_xzzx_code(5)


@pytest.fixture(scope="session")
def toric3():
    return build_toric_code(3)


@pytest.fixture(scope="session")
def rep3():
    return build_repetition_code(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
