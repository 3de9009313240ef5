"""
experiments/fixtures.py

Target trajectories shipped with the tool:

- a stationary hover log,
- an aggressive vertical climb that asks for more acceleration than the
  platform's thrust-to-weight margin allows,
- a 60 s climbing turn flown by the fixed-wing surrogate under a small
  attitude-hold autopilot, used as the recorded-log stand-in.
"""

import logging
from dataclasses import dataclass

import numpy as np
from simple_pid import PID

from dynamics import fixedwing
from dynamics.fixedwing import FixedWingParams
from vehicle.state import STATE_SIZE, ControlKind, ControlVector
from vehicle.trajectory import Trajectory, sample_count

logger = logging.getLogger(__name__)

FIXTURES = ("hover", "climb", "climbing-turn")


def hover_log(position=(0.0, 0.0, -100.0), duration=10.0, dt=0.1, yaw=0.0):
    """Motionless target held at `position`."""
    count = sample_count(duration, dt) + 1
    states = np.zeros((count, STATE_SIZE))
    states[:, 0:3] = position
    states[:, 8] = yaw
    return Trajectory(dt, states)


@dataclass(frozen=True)
class ClimbProfile:
    """Hover, boost upward, coast, brake, hover. Accelerations in g."""

    hover_time: float = 3.0
    boost_accel: float = 1.5
    boost_time: float = 0.6
    coast_time: float = 1.0
    brake_accel: float = 1.0
    total_time: float = 10.0


def aggressive_climb_log(position=(0.0, 0.0, -100.0), profile=None, dt=0.1, gravity=9.81):
    """
    Vertical climb whose boost phase exceeds a 2:1 thrust-to-weight platform's
    one-g upward margin. Velocities are written in the (level) body frame.
    """
    profile = profile or ClimbProfile()
    times = dt * np.arange(sample_count(profile.total_time, dt) + 1)
    boost = profile.boost_accel * gravity
    brake = profile.brake_accel * gravity
    climb_speed = boost * profile.boost_time
    brake_time = climb_speed / brake

    t1 = profile.hover_time
    t2 = t1 + profile.boost_time
    t3 = t2 + profile.coast_time
    t4 = t3 + brake_time

    def height_and_rate(t):
        if t <= t1:
            return 0.0, 0.0
        if t <= t2:
            s = t - t1
            return 0.5 * boost * s * s, boost * s
        h2 = 0.5 * boost * profile.boost_time ** 2
        if t <= t3:
            return h2 + climb_speed * (t - t2), climb_speed
        h3 = h2 + climb_speed * profile.coast_time
        if t <= t4:
            s = t - t3
            return h3 + climb_speed * s - 0.5 * brake * s * s, climb_speed - brake * s
        return h3 + 0.5 * climb_speed * brake_time, 0.0

    states = np.zeros((len(times), STATE_SIZE))
    states[:, 0:3] = position
    for i, t in enumerate(times):
        height, rate = height_and_rate(t)
        # NED: climbing lowers z
        states[i, 2] -= height
        states[i, 5] = -rate
    return Trajectory(dt, states)


@dataclass(frozen=True)
class AutopilotGains:
    roll_kp: float = 1.0
    roll_kd: float = 0.2
    pitch_kp: float = 2.0
    pitch_kd: float = 0.3
    speed_kp: float = 0.1


class AttitudeAutopilot:
    """
    Bank, pitch and airspeed hold around a trim point.

    Aileron tracks bank, elevator tracks pitch (negative elevator pitches up)
    and throttle holds airspeed; rudder stays neutral.
    """

    def __init__(self, trim_point, gains=None):
        gains = gains or AutopilotGains()
        self.trim = trim_point
        trim_elev = trim_point.control.elevator
        trim_tla = trim_point.control.throttle
        # pitch loop output is subtracted from the trim elevator
        self.roll = PID(gains.roll_kp, 0.0, gains.roll_kd, sample_time=None, output_limits=(-1.0, 1.0))
        self.pitch = PID(gains.pitch_kp, 0.0, gains.pitch_kd, sample_time=None,
                         output_limits=(trim_elev - 1.0, trim_elev + 1.0))
        self.speed = PID(gains.speed_kp, 0.0, 0.0, sample_time=None,
                         output_limits=(-trim_tla, 1.0 - trim_tla))

    def command(self, state, bank, pitch, airspeed, dt):
        self.roll.setpoint = bank
        self.pitch.setpoint = pitch
        self.speed.setpoint = airspeed
        roll, pitch_angle, _ = state.attitude
        trim = self.trim.control
        channels = np.array([
            self.roll(roll, dt=dt),
            trim.elevator - self.pitch(pitch_angle, dt=dt),
            trim.throttle + self.speed(float(np.linalg.norm(state.linear_velocity)), dt=dt),
            0.0,
        ])
        return ControlVector.clipped(channels, ControlKind.FIXED_WING)


@dataclass(frozen=True)
class TurnProfile:
    """Level, climbing turn, level out. Angles in radians, times in seconds."""

    level_time: float = 10.0
    turn_time: float = 30.0
    total_time: float = 60.0
    bank: float = np.radians(15.0)
    climb_pitch: float = 0.08

    def references(self, t, trim_pitch):
        if self.level_time <= t < self.level_time + self.turn_time:
            return self.bank, trim_pitch + self.climb_pitch
        return 0.0, trim_pitch


def climbing_turn_log(params=None, profile=None, dt=0.1, physics_dt=1.0 / 120.0, altitude=100.0):
    """
    Fly the surrogate through a climbing turn and log states and controls
    every `dt` seconds (601 samples for the default 60 s at 0.1 s).
    """
    params = params or FixedWingParams()
    profile = profile or TurnProfile()
    point = fixedwing.trim(params, position=(0.0, 0.0, -altitude))
    pilot = AttitudeAutopilot(point)
    substeps = int(round(dt / physics_dt))
    samples = sample_count(profile.total_time, dt) + 1

    state = point.state
    trim_pitch = float(point.state.attitude[1])
    states = np.empty((samples, STATE_SIZE))
    controls = np.empty((samples, 4))
    for k in range(samples):
        states[k] = state.to_vector()
        for j in range(substeps):
            t = k * dt + j * physics_dt
            bank, pitch = profile.references(t, trim_pitch)
            control = pilot.command(state, bank, pitch, params.trim_airspeed, physics_dt)
            if j == 0:
                controls[k] = control.channels
                if k == samples - 1:
                    break
            state = fixedwing.step_fw(state, control, params, physics_dt)
    logger.info("climbing turn: %d samples, final altitude %.1f m", samples, state.altitude)
    return Trajectory(dt, states, controls, control_kind=ControlKind.FIXED_WING)


def build_fixture(name, dt=0.1):
    """Build one of FIXTURES by name."""
    if name == "hover":
        return hover_log(dt=dt)
    if name == "climb":
        return aggressive_climb_log(dt=dt)
    if name == "climbing-turn":
        return climbing_turn_log(dt=dt)
    raise ValueError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
