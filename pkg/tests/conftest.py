import numpy as np
import pytest

from generic_mm.core import sample_states
from generic_mm.oscillator import UNIT_PARAMS, Oscillator
from generic_mm.reference import solve_reference
from generic_mm.schemes import Partition, run

DATA_Y0 = (1.0, 1.0, 1.0)
DATA_T = 15.0


@pytest.fixture(scope="session")
def model():
    return Oscillator(UNIT_PARAMS)


@pytest.fixture(scope="session")
def samples():
    return sample_states(100, seed=42)


@pytest.fixture(scope="session")
def unit_reference():
    return solve_reference(UNIT_PARAMS, DATA_Y0, DATA_T, abs_tol=1e-8, max_step=1e-4)


@pytest.fixture(scope="session")
def mm_run():
    return run("mm", DATA_Y0, Partition.uniform(DATA_T, 0.25), UNIT_PARAMS)


@pytest.fixture(scope="session")
def euler_run():
    return run("euler", DATA_Y0, Partition.uniform(DATA_T, 0.25), UNIT_PARAMS)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture(scope="session")
def half_tol_reference():
    return solve_reference(UNIT_PARAMS, DATA_Y0, DATA_T, abs_tol=5e-9, max_step=1e-4)


@pytest.fixture(scope="session")
def convergence_table(unit_reference):
    from generic_mm.diagnostics import convergence_study, dyadic_steps

    return convergence_study(UNIT_PARAMS, DATA_Y0, DATA_T, dyadic_steps(-1, 11),
                             ref=unit_reference)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
