"""
controller/mpc.py

Receding-horizon controller that makes the multi-rotor platform follow a target
trajectory. Each call rolls the target out over the horizon, optimizes the
platform's zero-order-hold control sequence against it and applies only the
first control; the remaining sequence warm-starts the next call.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

import config
from dynamics import kernels
from optimizer.minimize import BoxBounds, OptimizerConfig, minimize
from target.source import rollout_target
from vehicle.errors import ConfigError, DimensionError, NumericError
from vehicle.metrics import CostWeights
from vehicle.state import CONTROL_LABELS, CONTROL_SIZE, STATE_SIZE, ControlKind, ControlVector
from vehicle.trajectory import Trajectory

logger = logging.getLogger(__name__)

_HORIZON_EPS = 1e-9
_DT_EPS = 1e-9


def horizon_steps(horizon, control_dt):
    """Decision-step count for a horizon, or ConfigError when it does not divide evenly."""
    steps = round(horizon / control_dt)
    if steps < 1 or not math.isclose(steps * control_dt, horizon, abs_tol=_HORIZON_EPS):
        raise ConfigError(f"horizon {horizon} s is not a whole number of control steps of {control_dt} s")
    return steps


@dataclass(frozen=True)
class MpcConfig:
    """Horizon, discretization, cost weights, control bounds and optimizer settings."""

    horizon: float = config.MPC_DEFAULTS["horizon"]
    control_dt: float = config.MPC_DEFAULTS["control_dt"]
    physics_substeps: int = config.MPC_DEFAULTS["physics_substeps"]
    weights: CostWeights = field(default_factory=CostWeights)
    control_lower: float = config.MPC_DEFAULTS["control_lower"]
    control_upper: float = config.MPC_DEFAULTS["control_upper"]
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    # include the motor lag in the prediction model (model-mismatch studies only)
    model_lag: bool = config.MPC_DEFAULTS["model_lag"]

    def __post_init__(self):
        if not (self.horizon > 0.0 and self.control_dt > 0.0):
            raise ConfigError(f"horizon and control_dt must be positive, got {self.horizon}, {self.control_dt}")
        horizon_steps(self.horizon, self.control_dt)
        if int(self.physics_substeps) != self.physics_substeps or self.physics_substeps < 1:
            raise ConfigError(f"physics_substeps must be an integer >= 1, got {self.physics_substeps}")
        if not 0.0 <= self.control_lower <= self.control_upper <= 1.0:
            raise ConfigError(
                f"control bounds [{self.control_lower}, {self.control_upper}] must lie within [0, 1]"
            )
        object.__setattr__(self, "physics_substeps", int(self.physics_substeps))

    @classmethod
    def from_mapping(cls, mapping):
        """
        Build from a flat mapping holding controller keys (see MPC_DEFAULTS)
        and optimizer keys (see OPTIMIZER_DEFAULTS).
        """
        mapping = dict(mapping)
        optimizer_keys = {k: mapping.pop(k) for k in list(mapping) if k in config.OPTIMIZER_DEFAULTS}
        merged = config.merge_defaults(config.MPC_DEFAULTS, mapping)
        weights = CostWeights(np.array(merged.pop("state_weights")), merged.pop("control_weight"))
        return cls(weights=weights, optimizer=OptimizerConfig.from_mapping(optimizer_keys), **merged)

    @classmethod
    def from_file(cls, path):
        return cls.from_mapping(config.read_key_values(path))

    @property
    def steps(self):
        """Number of decision steps N."""
        return horizon_steps(self.horizon, self.control_dt)

    @property
    def physics_dt(self):
        return self.control_dt / self.physics_substeps

    @property
    def bounds(self):
        return BoxBounds.uniform(self.steps * CONTROL_SIZE, self.control_lower, self.control_upper)


@dataclass(frozen=True)
class PlanResult:
    control_sequence: np.ndarray
    predicted_platform: Trajectory
    cost: float
    optimizer_iterations: int
    converged: bool
    saturated_channels: np.ndarray

    @property
    def first_control(self):
        return ControlVector(self.control_sequence[0], ControlKind.MULTI_ROTOR)

    @property
    def saturation_bitmask(self):
        """One integer per step; bit i is set when channel i sits on a bound."""
        return self.saturated_channels.astype(int) @ (1 << np.arange(CONTROL_SIZE))

    def to_row(self, t):
        """Row for the harness's controls.csv (first control only)."""
        row = {"t": t}
        row.update(zip(CONTROL_LABELS, self.control_sequence[0].tolist()))
        row.update(
            cost=self.cost,
            iterations=self.optimizer_iterations,
            converged=int(self.converged),
            saturated=int(self.saturation_bitmask[0]),
        )
        return row


def _motors0(motors):
    if motors is None:
        return np.zeros(CONTROL_SIZE)
    return np.ascontiguousarray(motors.effective_commands, dtype=float)


def _target_window(target_traj, cfg):
    steps = cfg.steps
    if abs(target_traj.dt - cfg.control_dt) > _DT_EPS:
        raise DimensionError(f"target sampled every {target_traj.dt} s, controller steps every {cfg.control_dt} s")
    if len(target_traj.state_matrix) < steps + 1:
        raise DimensionError(f"target holds {len(target_traj.state_matrix)} states, the horizon needs {steps + 1}")
    return np.ascontiguousarray(target_traj.state_matrix[: steps + 1])


def _cost_function(platform_state, target_traj, params, cfg, motors=None):
    """Objective over the flattened (N*4) control vector, +inf when the rollout fails."""
    x0 = platform_state.to_vector()
    target = _target_window(target_traj, cfg)
    prm = params.as_array()
    motors0 = _motors0(motors)
    state_weights = np.ascontiguousarray(cfg.weights.state_weights, dtype=float)
    control_weight = cfg.weights.control_weight
    expected = cfg.steps * CONTROL_SIZE

    def objective(u_flat):
        u_flat = np.ascontiguousarray(u_flat, dtype=float)
        if u_flat.shape != (expected,):
            raise DimensionError(f"expected {expected} decision variables, got {u_flat.size}")
        return kernels.horizon_cost(
            u_flat, x0, target, prm, cfg.control_dt, cfg.physics_substeps,
            cfg.model_lag, motors0, state_weights, control_weight,
        )

    return objective


def horizon_cost(u_flat, platform_state, target_traj, params, cfg, motors=None):
    """
    Predicted tracking cost of a control sequence: the weighted squared state
    error at each of the N control steps plus control_weight * sum(u^2).

    Returns +inf when the prediction hits the pitch singularity or goes non-finite.
    """
    return float(_cost_function(platform_state, target_traj, params, cfg, motors)(u_flat))


def warm_start_sequence(previous, steps):
    """Previous sequence shifted one step with its final step duplicated; zeros when empty."""
    if previous is None or len(previous) == 0:
        return np.zeros((steps, CONTROL_SIZE))
    previous = np.asarray(previous, dtype=float).reshape(-1, CONTROL_SIZE)
    shifted = np.vstack([previous[1:], previous[-1:]])
    if len(shifted) < steps:
        shifted = np.vstack([shifted, np.repeat(shifted[-1:], steps - len(shifted), axis=0)])
    return shifted[:steps]


def _predict(platform_state, sequence, params, cfg, motors):
    states = np.empty((cfg.steps + 1, STATE_SIZE))
    # a failed prediction repeats its last valid state, which is what a plot should show
    kernels.multirotor_rollout(
        platform_state.to_vector(), np.ascontiguousarray(sequence), params.as_array(),
        cfg.control_dt, cfg.physics_substeps, cfg.model_lag, _motors0(motors), states,
    )
    return Trajectory(cfg.control_dt, states, sequence)


def plan(platform_state, target_traj, warm_start, params, cfg, motors=None):
    """
    Optimize the control sequence over one horizon.

    An optimizer failure does not raise: the best sequence found so far (or
    the warm start) comes back with converged=False.
    """
    steps = cfg.steps
    bounds = cfg.bounds
    objective = _cost_function(platform_state, target_traj, params, cfg, motors)
    x0 = bounds.project(warm_start_sequence(warm_start, steps).reshape(-1))

    try:
        result = minimize(objective, x0, bounds, cfg.optimizer)
        u_flat, cost, iterations, converged = result.x, float(result.fun), int(result.nit), bool(result.success)
    except NumericError as exc:
        logger.warning("optimizer failed (%s); keeping the warm-start sequence", exc)
        u_flat, cost, iterations, converged = x0, float(objective(x0)), 0, False

    sequence = bounds.project(u_flat).reshape(steps, CONTROL_SIZE)
    tol = config.SATURATION_TOLERANCE
    saturated = (np.abs(sequence - cfg.control_lower) <= tol) | (np.abs(sequence - cfg.control_upper) <= tol)
    return PlanResult(
        control_sequence=sequence,
        predicted_platform=_predict(platform_state, sequence, params, cfg, motors),
        cost=cost,
        optimizer_iterations=iterations,
        converged=converged,
        saturated_channels=saturated,
    )


class MimicController:
    """
    Receding-horizon target-to-platform controller.

    Holds the previous plan for warm starting, so one instance serves one
    closed loop from one thread.
    """

    def __init__(self, params, cfg=None, warm_start=True):
        self.params = params
        self.cfg = cfg or MpcConfig()
        self.warm_start = warm_start
        self.previous = None
        self.last_plan = None

    def reset(self):
        self.previous = None
        self.last_plan = None

    def control_step(self, platform_state, target_source, now, motors=None):
        """
        Plan against the target over [now, now + horizon] and return the first
        control together with the full plan.

        Raises WindowRangeError when the target cannot cover the window.
        """
        target_traj = rollout_target(target_source, now, self.cfg.horizon, self.cfg.control_dt)
        seed = self.previous if self.warm_start else None
        result = plan(platform_state, target_traj, seed, self.params, self.cfg, motors)
        if not result.converged:
            logger.warning(
                "t=%.6g s: plan not converged after %d iterations (cost %.6g)",
                now, result.optimizer_iterations, result.cost,
            )
        self.previous = result.control_sequence
        self.last_plan = result
        return result.first_control, result

