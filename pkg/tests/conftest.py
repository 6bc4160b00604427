import numpy as np
import pytest
from hypothesis import strategies as st

from optolaser.model import FIG1A, FIG1B, FIG1C, SystemParams

ACCEPTANCE_LINES = []


@pytest.fixture(params=["fig1a", "fig1b", "fig1c"])
def fig1(request):
    return request.param, {"fig1a": FIG1A, "fig1b": FIG1B, "fig1c": FIG1C}[request.param]


def random_params(rng: np.random.Generator, drive: float = 0.0) -> SystemParams:
    """Positive rates, detunings in [-1e-2, 1e-2]."""
    return SystemParams(
        delta_omega1=rng.uniform(-1e-2, 1e-2),
        delta_omega2=rng.uniform(-1e-2, 1e-2),
        omega_b=rng.uniform(-1e-2, 1e-2),
        gamma1=rng.uniform(1e-3, 2e-2),
        gamma2=rng.uniform(2e-4, 5e-3),
        gamma_b=rng.uniform(2e-4, 5e-3),
        g=rng.uniform(3e-3, 3e-2),
        omega_drive_amp=drive,
    )


detuning = st.floats(-1e-2, 1e-2)
rate = st.floats(2e-4, 2e-2)
params_strategy = st.builds(
    SystemParams,
    delta_omega1=detuning,
    delta_omega2=detuning,
    omega_b=detuning,
    gamma1=rate,
    gamma2=rate,
    gamma_b=rate,
    g=st.floats(3e-3, 3e-2),
    omega_drive_amp=st.floats(0.0, 2e-2),
)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
