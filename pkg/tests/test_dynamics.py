import math

import numpy as np
import pytest

from dynamics.fixedwing import FixedWingParams, simulate, step_fw, trim
from dynamics.multirotor import (
    MotorState,
    MultiRotorParams,
    apply_lag,
    forces_and_torques,
    rollout,
    step,
)
from target.disturbances import DisturbanceKind, constant_schedule, disturbance_sequence
from vehicle.errors import ControlKindError, DimensionError, ModelDomainError, SingularityError
from vehicle.state import ControlKind, ControlVector, VehicleState

PHYSICS_DT = 1.0 / 120.0


def _free_fall_error(params, substeps):
    """Distance between the integrated fall after 2 s and g t^2 / 2."""
    states = rollout(VehicleState.at_rest(), np.zeros((20, 4)), params, 0.1, substeps)
    return states[-1, 2] - 0.5 * params.gravity * 2.0 ** 2


def test_free_fall_matches_closed_form(drag_free_params):
    error = _free_fall_error(drag_free_params, 12)
    # semi-implicit Euler overshoots by g t dt / 2
    assert 0.0 < error < 0.17
    assert error == pytest.approx(0.5 * drag_free_params.gravity * 2.0 * PHYSICS_DT, rel=1e-9)


def test_free_fall_error_is_first_order(drag_free_params):
    coarse = _free_fall_error(drag_free_params, 12)
    fine = _free_fall_error(drag_free_params, 24)
    assert fine / coarse == pytest.approx(0.5, rel=1e-6)


def _pulse_final_position(params, substeps):
    controls = np.full((10, 4), 0.5)
    controls[:3] = 0.8
    return rollout(VehicleState.at_rest((0.0, 0.0, -100.0)), controls, params, 0.1, substeps)[-1, :3]


def test_thrust_pulse_error_is_first_order(params):
    reference = _pulse_final_position(params, 1200)
    coarse = np.linalg.norm(_pulse_final_position(params, 12) - reference)
    fine = np.linalg.norm(_pulse_final_position(params, 24) - reference)
    assert coarse > 0.0
    # the reference itself carries 1/100 of the coarse error
    assert fine / coarse == pytest.approx(0.5, abs=0.03)


def test_free_fall_keeps_attitude_level(drag_free_params):
    states = rollout(VehicleState.at_rest(), np.zeros((20, 4)), drag_free_params, 0.1, 12)
    assert np.all(states[:, 6:9] == 0.0)
    assert np.all(states[:, 0:2] == 0.0)


def test_hover_is_a_fixed_point(params, hover_state):
    assert params.hover_command == pytest.approx(0.5)
    motors = MotorState.uniform(params.hover_command)
    state = hover_state
    for _ in range(120):
        state = step(state, motors, params, PHYSICS_DT)
    assert np.max(np.abs(state.to_vector() - hover_state.to_vector())) < 1e-9


def test_step_is_bit_identical_across_calls(params):
    state = VehicleState((1.0, -2.0, -50.0), (3.0, 0.5, -1.0), (0.1, -0.2, 1.0), (0.3, -0.1, 0.2))
    motors = MotorState([0.3, 0.6, 0.55, 0.45])
    first = step(state, motors, params, PHYSICS_DT).to_vector()
    second = step(state, motors, params, PHYSICS_DT).to_vector()
    assert first.tobytes() == second.tobytes()


def test_speed_decays_while_faster_than_terminal(params):
    terminal = params.weight / params.linear_drag_coeffs[2]
    state = VehicleState((0.0, 0.0, -1000.0), (20.0, 0.0, 2.0 * terminal), np.zeros(3), np.zeros(3))
    states = rollout(state, np.zeros((20, 4)), params, 0.1, 12)
    # attitude stays level, so body and world speeds agree
    assert np.all(states[:, 6:9] == 0.0)
    speed = np.linalg.norm(states[:, 3:6], axis=1)
    assert speed[-1] > terminal
    assert np.all(np.diff(speed) < 0.0)


def test_rollout_returns_one_row_per_control_plus_initial(params, hover_state):
    states = rollout(hover_state, np.full((7, 4), 0.5), params, 0.1, 12)
    assert states.shape == (8, 12)
    assert np.allclose(states[0], hover_state.to_vector())


def test_lag_coefficient_and_geometric_convergence():
    dt, t_lag = PHYSICS_DT, 1.0 / 30.0
    assert dt / (dt + t_lag) == pytest.approx(0.2)
    raw = ControlVector.uniform(1.0)
    motors = MotorState.uniform(0.0)
    for k in range(1, 16):
        motors = apply_lag(motors, raw, dt, t_lag)
        expected = 1.0 - 0.8 ** k
        assert np.allclose(motors.effective_commands, expected, atol=1e-12)


def test_zero_lag_passes_command_through():
    raw = ControlVector([0.1, 0.2, 0.3, 0.4])
    motors = apply_lag(MotorState.uniform(0.9), raw, PHYSICS_DT, 0.0)
    assert np.array_equal(motors.effective_commands, raw.channels)


def test_lag_rejects_fixedwing_control():
    with pytest.raises(ControlKindError):
        apply_lag(MotorState.uniform(0.0), ControlVector.uniform(0.5, ControlKind.FIXED_WING), PHYSICS_DT, 0.03)


def test_single_motor_wrench_signs(drag_free_params):
    force, torque = forces_and_torques(VehicleState.at_rest(), MotorState([1.0, 0.0, 0.0, 0.0]), drag_free_params)
    thrust = drag_free_params.max_thrust_per_motor
    d = drag_free_params.arm_length / math.sqrt(2.0)
    assert force[2] == pytest.approx(drag_free_params.weight - thrust)
    # front-right motor rolls left and pitches nose up
    assert torque[0] == pytest.approx(-d * thrust)
    assert torque[1] == pytest.approx(d * thrust)
    assert torque[2] == pytest.approx(drag_free_params.torque_coefficient * thrust)


def test_uniform_thrust_produces_no_torque(params):
    _, torque = forces_and_torques(VehicleState.at_rest(), MotorState.uniform(0.7), params)
    assert np.allclose(torque, 0.0, atol=1e-15)


def test_step_raises_in_the_singular_band(params):
    state = VehicleState(np.zeros(3), np.zeros(3), (0.0, 0.5 * math.pi - 0.005, 0.0), np.zeros(3))
    assert state.near_singular
    with pytest.raises(SingularityError):
        step(state, MotorState.uniform(0.5), params, PHYSICS_DT)


def test_multirotor_params_validation():
    with pytest.raises(DimensionError):
        MultiRotorParams(inertia_diag=(0.1, 0.1))
    with pytest.raises(ValueError):
        MultiRotorParams(mass=0.0)


def test_multirotor_params_from_mapping():
    params = MultiRotorParams.from_mapping({"mass": "2.0", "linear_drag_coeffs": "0, 0, 0.2"})
    assert params.mass == 2.0
    assert params.linear_drag_coeffs == (0.0, 0.0, 0.2)


@pytest.fixture(scope="module")
def fw_params():
    return FixedWingParams()


@pytest.fixture(scope="module")
def trim_point(fw_params):
    return trim(fw_params, position=(0.0, 0.0, -100.0))


def test_trim_balances_the_surrogate(trim_point):
    assert trim_point.residual <= 1e-6
    assert trim_point.control.kind is ControlKind.FIXED_WING
    assert 0.0 < trim_point.control.throttle < 1.0
    assert trim_point.state.linear_velocity[0] > 17.0


def test_trimmed_flight_holds_altitude_and_speed(fw_params, trim_point):
    controls = np.tile(trim_point.control.channels, (240, 1))
    states = simulate(trim_point.state, controls, fw_params, PHYSICS_DT)
    assert states.shape == (241, 12)
    assert abs(states[-1, 2] - states[0, 2]) < 0.01
    assert abs(states[-1, 3] - states[0, 3]) < 0.01
    assert states[-1, 0] == pytest.approx(18.0 * 2.0, rel=0.01)


def test_fixedwing_rejects_low_airspeed(fw_params, trim_point):
    with pytest.raises(ModelDomainError):
        step_fw(VehicleState.at_rest(), trim_point.control, fw_params, PHYSICS_DT)


def test_fixedwing_rejects_multirotor_control(fw_params, trim_point):
    with pytest.raises(ControlKindError):
        step_fw(trim_point.state, ControlVector.uniform(0.5), fw_params, PHYSICS_DT)


def test_elevator_pulse_pitches_the_nose_up(fw_params, trim_point):
    controls = np.tile(trim_point.control.channels, (60, 1))
    controls[:24, 1] -= 0.5
    states = simulate(trim_point.state, controls, fw_params, PHYSICS_DT)
    assert states[24, 7] > trim_point.state.attitude[1]


def test_up_elevator_disturbance_raises_pitch_rate_in_one_step(fw_params, trim_point):
    base = constant_schedule(trim_point.control, 1.0, PHYSICS_DT)
    disturbed = disturbance_sequence(base, DisturbanceKind.PITCH, 0.0, PHYSICS_DT)
    control = ControlVector(disturbed.control_matrix[0], ControlKind.FIXED_WING)
    assert trim_point.state.angular_rates[1] == 0.0
    assert step_fw(trim_point.state, control, fw_params, PHYSICS_DT).angular_rates[1] > 0.0
