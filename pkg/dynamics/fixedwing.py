"""
dynamics/fixedwing.py

Simplified fixed-wing surrogate for the target vehicle: linear lift in angle of
attack, parabolic drag polar, sideslip side force, rate damping and control
moments proportional to dynamic pressure. Integrated with the same two-step
Euler scheme as the platform.

Sign conventions: positive elevator is trailing edge down (nose-down moment),
positive aileron rolls right, positive rudder yaws right.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import root

import config
from dynamics import kernels
from dynamics.multirotor import raise_for_status
from vehicle.errors import ControlKindError, DimensionError, ModelDomainError, NumericError
from vehicle.state import ControlKind, ControlVector, VehicleState

logger = logging.getLogger(__name__)

_VECTOR_SIZES = {"inertia_diag": 3, "control_effectiveness": 4}
TRIM_TOLERANCE = 1e-8


@dataclass(frozen=True)
class FixedWingParams:
    """Coefficients of the fixed-wing surrogate (SI units, coefficients per rad)."""

    mass: float = config.FIXEDWING_DEFAULTS["mass"]
    inertia_diag: tuple = config.FIXEDWING_DEFAULTS["inertia_diag"]
    reference_area: float = config.FIXEDWING_DEFAULTS["reference_area"]
    reference_chord: float = config.FIXEDWING_DEFAULTS["reference_chord"]
    reference_span: float = config.FIXEDWING_DEFAULTS["reference_span"]
    air_density: float = config.FIXEDWING_DEFAULTS["air_density"]
    trim_airspeed: float = config.FIXEDWING_DEFAULTS["trim_airspeed"]
    cl0: float = config.FIXEDWING_DEFAULTS["cl0"]
    cl_alpha: float = config.FIXEDWING_DEFAULTS["cl_alpha"]
    cd0: float = config.FIXEDWING_DEFAULTS["cd0"]
    induced_drag_factor: float = config.FIXEDWING_DEFAULTS["induced_drag_factor"]
    cy_beta: float = config.FIXEDWING_DEFAULTS["cy_beta"]
    cl_beta: float = config.FIXEDWING_DEFAULTS["cl_beta"]
    cl_p: float = config.FIXEDWING_DEFAULTS["cl_p"]
    cm0: float = config.FIXEDWING_DEFAULTS["cm0"]
    cm_alpha: float = config.FIXEDWING_DEFAULTS["cm_alpha"]
    cm_q: float = config.FIXEDWING_DEFAULTS["cm_q"]
    cn_beta: float = config.FIXEDWING_DEFAULTS["cn_beta"]
    cn_r: float = config.FIXEDWING_DEFAULTS["cn_r"]
    control_effectiveness: tuple = config.FIXEDWING_DEFAULTS["control_effectiveness"]
    max_thrust: float = config.FIXEDWING_DEFAULTS["max_thrust"]
    gravity: float = config.FIXEDWING_DEFAULTS["gravity"]

    def __post_init__(self):
        for name, size in _VECTOR_SIZES.items():
            value = tuple(float(v) for v in getattr(self, name))
            if len(value) != size:
                raise DimensionError(f"{name} must have {size} components")
            object.__setattr__(self, name, value)
        positive = ("mass", "reference_area", "reference_chord", "reference_span",
                    "air_density", "trim_airspeed", "max_thrust", "gravity")
        for name in positive:
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if min(self.inertia_diag) <= 0.0:
            raise ValueError("inertia_diag entries must be positive")

    @classmethod
    def from_mapping(cls, mapping):
        merged = config.merge_defaults(config.FIXEDWING_DEFAULTS, mapping)
        return cls(**merged)

    @classmethod
    def from_file(cls, path):
        return cls.from_mapping(config.read_key_values(path))

    def as_array(self):
        k = kernels
        prm = np.empty(k.FW_SIZE)
        prm[k.FW_MASS] = self.mass
        prm[k.FW_IXX:k.FW_IZZ + 1] = self.inertia_diag
        prm[k.FW_AREA] = self.reference_area
        prm[k.FW_CHORD] = self.reference_chord
        prm[k.FW_SPAN] = self.reference_span
        prm[k.FW_RHO] = self.air_density
        prm[k.FW_CL0] = self.cl0
        prm[k.FW_CLA] = self.cl_alpha
        prm[k.FW_CD0] = self.cd0
        prm[k.FW_K] = self.induced_drag_factor
        prm[k.FW_CYB] = self.cy_beta
        prm[k.FW_CLB] = self.cl_beta
        prm[k.FW_CLP] = self.cl_p
        prm[k.FW_CM0] = self.cm0
        prm[k.FW_CMA] = self.cm_alpha
        prm[k.FW_CMQ] = self.cm_q
        prm[k.FW_CNB] = self.cn_beta
        prm[k.FW_CNR] = self.cn_r
        prm[k.FW_E_AIL:k.FW_E_RUD + 1] = self.control_effectiveness
        prm[k.FW_TMAX] = self.max_thrust
        prm[k.FW_GRAVITY] = self.gravity
        prm[k.FW_MIN_AIRSPEED] = config.MIN_AIRSPEED
        return prm


def _require_fixedwing(control):
    if not isinstance(control, ControlVector) or control.kind is not ControlKind.FIXED_WING:
        kind = getattr(control, "kind", type(control).__name__)
        raise ControlKindError(f"expected a fixed-wing control, got {kind}")


def raise_for_fw_status(status, what):
    if status == kernels.STATUS_LOW_AIRSPEED:
        raise ModelDomainError(f"{what}: airspeed below {config.MIN_AIRSPEED} m/s")
    raise_for_status(status, what)


def step_fw(state, control, params, dt):
    """Advance the fixed-wing surrogate by one physics step."""
    _require_fixedwing(control)
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    out = np.empty(12)
    status = kernels.fixedwing_step(state.to_vector(), control.channels, params.as_array(), float(dt), out)
    raise_for_fw_status(status, "fixed-wing step")
    return VehicleState.from_vector(out)


def simulate(state, controls, params, dt):
    """
    Integrate one physics step per control row (fixed-wing channel order).

    Returns the (n+1, 12) state matrix.
    """
    controls = np.ascontiguousarray(controls, dtype=float).reshape(-1, 4)
    states = np.empty((controls.shape[0] + 1, 12))
    status, index = kernels.fixedwing_rollout(state.to_vector(), controls, params.as_array(), float(dt), states)
    if status != kernels.STATUS_OK:
        raise_for_fw_status(status, f"fixed-wing step {index} (t={index * dt:.6g} s)")
    return states


@dataclass(frozen=True)
class TrimPoint:
    state: VehicleState
    control: ControlVector
    residual: float


def trim(params, airspeed=None, position=(0.0, 0.0, 0.0), heading=0.0):
    """
    Wings-level, constant-altitude trim at `airspeed`.

    Solves for (pitch, elevator, throttle) so that the forward and vertical
    accelerations and the pitch acceleration vanish, with pitch equal to the
    angle of attack (zero flight-path angle).
    """
    airspeed = float(airspeed or params.trim_airspeed)
    prm = params.as_array()
    accel = np.empty(6)

    def level_state(theta):
        x = np.zeros(12)
        x[0:3] = position
        x[3] = airspeed * np.cos(theta)
        x[5] = airspeed * np.sin(theta)
        x[7] = theta
        x[8] = heading
        return x

    def residual(z):
        theta, elev, tla = z
        ctrl = np.array([0.0, elev, tla, 0.0])
        status = kernels.fixedwing_accelerations(level_state(theta), ctrl, prm, accel)
        if status != kernels.STATUS_OK:
            return np.full(3, 1e6)
        return np.array([accel[0], accel[2], accel[4]])

    # initial guess from lift = weight and pitch-moment balance
    qbar_s = 0.5 * params.air_density * airspeed ** 2 * params.reference_area
    cl = params.mass * params.gravity / qbar_s
    alpha = (cl - params.cl0) / params.cl_alpha
    elev = -(params.cm0 + params.cm_alpha * alpha) / params.control_effectiveness[1]
    drag = qbar_s * (params.cd0 + params.induced_drag_factor * cl ** 2)
    tla = drag / (params.max_thrust * params.control_effectiveness[2])

    solution = root(residual, np.array([alpha, elev, tla]), method="hybr", tol=TRIM_TOLERANCE)
    theta, elev, tla = solution.x
    worst = float(np.max(np.abs(residual(solution.x))))
    if not solution.success or worst > 1e-6:
        raise NumericError(f"trim did not converge at {airspeed} m/s (residual {worst:.3g}): {solution.message}")
    if not (-1.0 <= elev <= 1.0 and 0.0 <= tla <= 1.0):
        raise ModelDomainError(f"no trim within control limits at {airspeed} m/s (elev={elev:.3g}, tla={tla:.3g})")
    logger.debug("trim at %.3g m/s: pitch=%.6g elev=%.6g tla=%.6g", airspeed, theta, elev, tla)
    return TrimPoint(
        VehicleState.from_vector(level_state(theta)),
        ControlVector(np.array([0.0, elev, tla, 0.0]), ControlKind.FIXED_WING),
        worst,
    )
