import numpy as np
import pytest

from controller.mpc import MpcConfig
from dynamics.multirotor import MultiRotorParams
from experiments.fixtures import hover_log
from target.source import RecordedTarget
from vehicle.state import VehicleState

HOVER_POSITION = (0.0, 0.0, -100.0)


@pytest.fixture
def params():
    return MultiRotorParams()


@pytest.fixture
def drag_free_params():
    return MultiRotorParams(linear_drag_coeffs=(0.0, 0.0, 0.0), angular_drag_coeffs=(0.0, 0.0, 0.0))


@pytest.fixture
def mpc_config():
    return MpcConfig()


@pytest.fixture
def hover_state():
    return VehicleState.at_rest(HOVER_POSITION)


@pytest.fixture
def hover_target():
    """Stationary target covering the default horizon at the default control step."""
    return hover_log(HOVER_POSITION, duration=1.0, dt=0.1)


@pytest.fixture
def hover_source():
    return RecordedTarget(hover_log(HOVER_POSITION, duration=10.0, dt=0.1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
