"""
dynamics/multirotor.py

Deterministic 6-DOF quad-rotor (the platform): linear motor thrust, linear
drag, gravity, two-step Euler integration and the first-order motor lag.
"""

from dataclasses import dataclass

import numpy as np

import config
from dynamics import kernels
from vehicle.errors import ControlKindError, DimensionError, NumericError, SingularityError
from vehicle.state import ControlKind, ControlVector, VehicleState

_VECTOR_FIELDS = ("inertia_diag", "linear_drag_coeffs", "angular_drag_coeffs")


@dataclass(frozen=True)
class MultiRotorParams:
    """Physical parameters of the platform quad-rotor (SI units)."""

    mass: float = config.MULTIROTOR_DEFAULTS["mass"]
    inertia_diag: tuple = config.MULTIROTOR_DEFAULTS["inertia_diag"]
    arm_length: float = config.MULTIROTOR_DEFAULTS["arm_length"]
    max_thrust_per_motor: float = config.MULTIROTOR_DEFAULTS["max_thrust_per_motor"]
    torque_coefficient: float = config.MULTIROTOR_DEFAULTS["torque_coefficient"]
    linear_drag_coeffs: tuple = config.MULTIROTOR_DEFAULTS["linear_drag_coeffs"]
    angular_drag_coeffs: tuple = config.MULTIROTOR_DEFAULTS["angular_drag_coeffs"]
    gravity: float = config.MULTIROTOR_DEFAULTS["gravity"]
    lag_time_constant: float = config.MULTIROTOR_DEFAULTS["lag_time_constant"]

    def __post_init__(self):
        for name in _VECTOR_FIELDS:
            value = tuple(float(v) for v in getattr(self, name))
            if len(value) != 3:
                raise DimensionError(f"{name} must have 3 components")
            object.__setattr__(self, name, value)
        if min(self.mass, self.arm_length, self.max_thrust_per_motor) <= 0.0:
            raise ValueError("mass, arm_length and max_thrust_per_motor must be positive")
        if min(self.inertia_diag) <= 0.0:
            raise ValueError("inertia_diag entries must be positive")
        if min(self.linear_drag_coeffs + self.angular_drag_coeffs) < 0.0:
            raise ValueError("drag coefficients must be non-negative")
        if self.gravity <= 0.0 or self.lag_time_constant < 0.0:
            raise ValueError("gravity must be positive and lag_time_constant non-negative")

    @classmethod
    def from_mapping(cls, mapping):
        """Build from flat key-value overrides (strings allowed)."""
        merged = config.merge_defaults(config.MULTIROTOR_DEFAULTS, mapping)
        return cls(**merged)

    @classmethod
    def from_file(cls, path):
        return cls.from_mapping(config.read_key_values(path))

    @property
    def weight(self):
        return self.mass * self.gravity

    @property
    def thrust_to_weight(self):
        return 4.0 * self.max_thrust_per_motor / self.weight

    @property
    def hover_command(self):
        """Per-motor command that balances gravity when level."""
        return self.weight / (4.0 * self.max_thrust_per_motor)

    def as_array(self):
        """Flat vector in the layout the compiled kernels expect."""
        prm = np.empty(kernels.MR_SIZE)
        prm[kernels.MR_MASS] = self.mass
        prm[kernels.MR_IXX:kernels.MR_IZZ + 1] = self.inertia_diag
        prm[kernels.MR_ARM] = self.arm_length
        prm[kernels.MR_TMAX] = self.max_thrust_per_motor
        prm[kernels.MR_KQ] = self.torque_coefficient
        prm[kernels.MR_CDX:kernels.MR_CDZ + 1] = self.linear_drag_coeffs
        prm[kernels.MR_CAX:kernels.MR_CAZ + 1] = self.angular_drag_coeffs
        prm[kernels.MR_GRAVITY] = self.gravity
        prm[kernels.MR_TLAG] = self.lag_time_constant
        return prm


@dataclass(frozen=True)
class MotorState:
    """Lag-filtered commands actually delivered to the motors."""

    effective_commands: np.ndarray

    def __post_init__(self):
        commands = np.array(self.effective_commands, dtype=float).reshape(-1)
        if commands.shape != (4,):
            raise DimensionError("effective_commands must have 4 components")
        if not np.all(np.isfinite(commands)):
            raise NumericError(f"non-finite motor commands {commands.tolist()}")
        if np.any(commands < 0.0) or np.any(commands > 1.0):
            raise ValueError(f"motor commands {commands.tolist()} outside [0, 1]")
        commands.setflags(write=False)
        object.__setattr__(self, "effective_commands", commands)

    @classmethod
    def from_control(cls, control):
        _require_multirotor(control)
        return cls(control.channels)

    @classmethod
    def uniform(cls, value):
        return cls(np.full(4, float(value)))


def _require_multirotor(control):
    if not isinstance(control, ControlVector) or control.kind is not ControlKind.MULTI_ROTOR:
        kind = getattr(control, "kind", type(control).__name__)
        raise ControlKindError(f"expected a multi-rotor control, got {kind}")


def apply_lag(prev, raw, dt, t_lag):
    """First-order motor lag; T_lag = 0 passes the raw command straight through."""
    _require_multirotor(raw)
    if dt <= 0.0 or t_lag < 0.0:
        raise ValueError(f"need dt > 0 and T_lag >= 0, got dt={dt}, T_lag={t_lag}")
    out = np.empty(4)
    kernels.lag_filter(prev.effective_commands, raw.channels, float(dt), float(t_lag), out)
    # rounding can step a hair outside the hull of two in-range values
    return MotorState(np.clip(out, 0.0, 1.0))


def forces_and_torques(state, motors, params):
    """Body-frame force [N] and torque [N·m] from thrust, drag and gravity."""
    force = np.empty(3)
    torque = np.empty(3)
    kernels.multirotor_wrench(state.to_vector(), motors.effective_commands, params.as_array(), force, torque)
    return force, torque


def raise_for_status(status, what):
    if status == kernels.STATUS_SINGULAR:
        raise SingularityError(f"{what}: pitch entered the singular band")
    if status == kernels.STATUS_NONFINITE:
        raise NumericError(f"{what}: non-finite state")


def step(state, motors, params, dt):
    """Advance the platform by one physics step of length dt."""
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    out = np.empty(12)
    status = kernels.multirotor_step(state.to_vector(), motors.effective_commands, params.as_array(), float(dt), out)
    raise_for_status(status, "multi-rotor step")
    return VehicleState.from_vector(out)


def rollout(state, controls, params, control_dt, substeps, motors=None, use_lag=False):
    """
    Simulate a zero-order-hold control sequence (rows of 4 commands).

    Returns the (N+1, 12) state matrix sampled at control_dt.
    """
    controls = np.ascontiguousarray(controls, dtype=float).reshape(-1, 4)
    motors0 = (motors.effective_commands if motors is not None else np.zeros(4)).astype(float)
    states = np.empty((controls.shape[0] + 1, 12))
    status = kernels.multirotor_rollout(
        state.to_vector(), controls, params.as_array(), float(control_dt), int(substeps),
        bool(use_lag), motors0, states,
    )
    raise_for_status(status, "multi-rotor rollout")
    return states
