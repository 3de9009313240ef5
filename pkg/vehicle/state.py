"""
vehicle/state.py

Value types describing a vehicle at one instant: the 12-component rigid-body
state and the 4-channel normalized control vector.

Frames: positions are world NED (z down, altitude = -z); linear velocities and
angular rates are body frame; attitude is Z-Y-X Euler angles (roll, pitch, yaw).
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from vehicle.errors import ControlBoundsError, NumericError, SingularityError

STATE_SIZE = 12
CONTROL_SIZE = 4

STATE_LABELS = ("x", "y", "z", "u", "v", "w", "roll", "pitch", "yaw", "p", "q", "r")
CONTROL_LABELS = ("c0", "c1", "c2", "c3")

# Pitch values closer than this to +-pi/2 are treated as gimbal lock.
PITCH_SINGULARITY_MARGIN = 0.01

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


def _frozen(values, size, name):
    arr = np.array(values, dtype=float).reshape(-1)
    if arr.shape != (size,):
        raise ValueError(f"{name} must have {size} components, got {arr.size}")
    arr.setflags(write=False)
    return arr


def wrap_angle(angle):
    """Wrap a scalar or array of angles into [-pi, pi)."""
    return angle - TWO_PI * np.floor((angle + math.pi) / TWO_PI)


def wrap_attitude(raw):
    """
    Wrap roll and yaw into [-pi, pi) and clamp pitch into [-pi/2, pi/2].

    Returns the wrapped 3-vector and a flag telling whether pitch had to be clamped.
    """
    raw = np.asarray(raw, dtype=float).reshape(3)
    if not np.all(np.isfinite(raw)):
        raise NumericError(f"non-finite attitude {raw.tolist()}")
    roll, pitch, yaw = raw
    clamped_pitch = min(max(pitch, -HALF_PI), HALF_PI)
    wrapped = np.array([wrap_angle(roll), clamped_pitch, wrap_angle(yaw)])
    return wrapped, clamped_pitch != pitch


def body_to_world(attitude):
    """Rotation matrix taking body-frame vectors into the NED world frame."""
    phi, theta, psi = attitude
    cphi, sphi = math.cos(phi), math.sin(phi)
    cth, sth = math.cos(theta), math.sin(theta)
    cpsi, spsi = math.cos(psi), math.sin(psi)
    return np.array([
        [cth * cpsi, sphi * sth * cpsi - cphi * spsi, cphi * sth * cpsi + sphi * spsi],
        [cth * spsi, sphi * sth * spsi + cphi * cpsi, cphi * sth * spsi - sphi * cpsi],
        [-sth, sphi * cth, cphi * cth],
    ])


@dataclass(frozen=True)
class VehicleState:
    """
    Complete 6-DOF rigid-body state.

    Attributes:
        position: world NED position [m], shape (3,)
        linear_velocity: body-frame velocity (u, v, w) [m/s], shape (3,)
        attitude: Euler angles (roll, pitch, yaw) [rad], shape (3,)
        angular_rates: body rates (p, q, r) [rad/s], shape (3,)
    """

    position: np.ndarray
    linear_velocity: np.ndarray
    attitude: np.ndarray
    angular_rates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", _frozen(self.position, 3, "position"))
        object.__setattr__(self, "linear_velocity", _frozen(self.linear_velocity, 3, "linear_velocity"))
        object.__setattr__(self, "angular_rates", _frozen(self.angular_rates, 3, "angular_rates"))
        attitude = np.array(self.attitude, dtype=float).reshape(-1)
        if attitude.shape != (3,):
            raise ValueError(f"attitude must have 3 components, got {attitude.size}")
        for name in ("position", "linear_velocity", "angular_rates"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise NumericError(f"non-finite {name}: {getattr(self, name).tolist()}")
        wrapped, clamped = wrap_attitude(attitude)
        if clamped:
            raise SingularityError(f"pitch {attitude[1]:.6g} rad outside [-pi/2, pi/2]")
        object.__setattr__(self, "attitude", _frozen(wrapped, 3, "attitude"))

    @classmethod
    def from_vector(cls, vector):
        vector = np.asarray(vector, dtype=float).reshape(-1)
        if vector.shape != (STATE_SIZE,):
            raise ValueError(f"state vector must have {STATE_SIZE} components, got {vector.size}")
        return cls(vector[0:3], vector[3:6], vector[6:9], vector[9:12])

    @classmethod
    def at_rest(cls, position=(0.0, 0.0, 0.0), yaw=0.0):
        """Level, motionless state at a world position."""
        return cls(position, np.zeros(3), (0.0, 0.0, yaw), np.zeros(3))

    def to_vector(self):
        return np.concatenate([self.position, self.linear_velocity, self.attitude, self.angular_rates])

    @property
    def altitude(self):
        return -float(self.position[2])

    def world_velocity(self):
        return body_to_world(self.attitude) @ self.linear_velocity

    @property
    def near_singular(self):
        return abs(self.attitude[1]) > HALF_PI - PITCH_SINGULARITY_MARGIN


class ControlKind(Enum):
    MULTI_ROTOR = "multirotor"
    FIXED_WING = "fixedwing"


# Per-channel admissible ranges, in channel order.
CONTROL_RANGES = {
    ControlKind.MULTI_ROTOR: ((0.0, 1.0),) * 4,
    # ail, elev, tla, rud
    ControlKind.FIXED_WING: ((-1.0, 1.0), (-1.0, 1.0), (0.0, 1.0), (-1.0, 1.0)),
}


def control_bounds(kind):
    """Lower and upper channel bounds for a control kind as two arrays."""
    ranges = np.array(CONTROL_RANGES[kind], dtype=float)
    return ranges[:, 0], ranges[:, 1]


@dataclass(frozen=True)
class ControlVector:
    """Normalized 4-channel actuator command for either vehicle kind."""

    channels: np.ndarray
    kind: ControlKind = ControlKind.MULTI_ROTOR

    def __post_init__(self):
        channels = _frozen(self.channels, CONTROL_SIZE, "channels")
        if not np.all(np.isfinite(channels)):
            raise NumericError(f"non-finite control {channels.tolist()}")
        lower, upper = control_bounds(self.kind)
        if np.any(channels < lower) or np.any(channels > upper):
            raise ControlBoundsError(
                f"{self.kind.value} control {channels.tolist()} outside "
                f"[{lower.tolist()}, {upper.tolist()}]"
            )
        object.__setattr__(self, "channels", channels)

    @classmethod
    def clipped(cls, channels, kind=ControlKind.MULTI_ROTOR):
        """Build a control, projecting the channels onto the admissible box first."""
        lower, upper = control_bounds(kind)
        return cls(np.clip(np.asarray(channels, dtype=float), lower, upper), kind)

    @classmethod
    def uniform(cls, value, kind=ControlKind.MULTI_ROTOR):
        return cls(np.full(CONTROL_SIZE, float(value)), kind)

    # Fixed-wing channel names
    @property
    def aileron(self):
        return float(self.channels[0])

    @property
    def elevator(self):
        return float(self.channels[1])

    @property
    def throttle(self):
        return float(self.channels[2])

    @property
    def rudder(self):
        return float(self.channels[3])
