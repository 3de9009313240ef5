"""
vehicle/trajectory.py

Uniformly sampled sequences of states and/or controls.

States and controls are held as read-only matrices (one row per sample) so that
rollouts and metrics can work on whole arrays.
"""

import math
from dataclasses import dataclass

import numpy as np

from vehicle.errors import DimensionError, NumericError
from vehicle.state import (
    CONTROL_SIZE,
    STATE_SIZE,
    ControlKind,
    control_bounds,
    wrap_angle,
)


def _matrix(values, width, name):
    if values is None:
        arr = np.empty((0, width))
    else:
        arr = np.array(values, dtype=float)
        if arr.size == 0:
            arr = np.empty((0, width))
    if arr.ndim != 2 or arr.shape[1] != width:
        raise DimensionError(f"{name} must be an (n, {width}) matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"non-finite entries in {name}")
    arr.setflags(write=False)
    return arr


def sample_count(duration, dt):
    """Number of periods of length dt that cover `duration` (ceil, tolerant of rounding)."""
    return int(math.ceil(duration / dt - 1e-9))


@dataclass(frozen=True)
class Trajectory:
    """
    Time-indexed sequence with a fixed sample period.

    Attributes:
        dt: sample period [s], > 0
        state_matrix: (n, 12) states, possibly empty
        control_matrix: (m, 4) controls, possibly empty; m is n or n - 1 when both are present
        start_time: time of the first sample [s]
        control_kind: vehicle kind of the controls
    """

    dt: float
    state_matrix: np.ndarray = None
    control_matrix: np.ndarray = None
    start_time: float = 0.0
    control_kind: ControlKind = ControlKind.MULTI_ROTOR

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise DimensionError(f"sample period must be positive, got {self.dt}")
        states = _matrix(self.state_matrix, STATE_SIZE, "state_matrix")
        controls = _matrix(self.control_matrix, CONTROL_SIZE, "control_matrix")
        if len(states) and len(controls) and len(controls) not in (len(states), len(states) - 1):
            raise DimensionError(
                f"{len(controls)} controls do not match {len(states)} states"
            )
        if len(controls):
            lower, upper = control_bounds(self.control_kind)
            if np.any(controls < lower) or np.any(controls > upper):
                raise DimensionError(f"controls outside the {self.control_kind.value} channel bounds")
        if len(states):
            wrapped = states.copy()
            wrapped[:, 6] = wrap_angle(wrapped[:, 6])
            wrapped[:, 8] = wrap_angle(wrapped[:, 8])
            wrapped.setflags(write=False)
            states = wrapped
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "start_time", float(self.start_time))
        object.__setattr__(self, "state_matrix", states)
        object.__setattr__(self, "control_matrix", controls)

    def __len__(self):
        return max(len(self.state_matrix), len(self.control_matrix))

    @property
    def positions(self):
        return self.state_matrix[:, 0:3]

    @property
    def times(self):
        return self.start_time + self.dt * np.arange(len(self))

    @property
    def end_time(self):
        return self.start_time + self.dt * (len(self) - 1)
