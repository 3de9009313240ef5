"""
experiments/harness.py

Closed-loop experiment runner. The target and the platform advance in lock
step at the controller rate; the platform plant integrates at the physics rate
in between. Every run writes four CSV files into its output directory:

    target.csv    target states at the controller rate
    platform.csv  platform states plus the controls applied after each sample
    controls.csv  t,c0..c3 plus optimizer cost, iterations, converged, saturated
    report.csv    key,value summary (see RunReport)
"""

import logging
import time
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

import config
from controller.mpc import MimicController
from dynamics import fixedwing
from dynamics.multirotor import MotorState, apply_lag, step
from experiments.fixtures import hover_log
from experiments.spec import Scenario
from target.disturbances import DisturbanceKind, constant_schedule, disturbance_sequence
from target.logs import load_log, load_schedule, save_log, write_frame
from target.source import ModelTarget, RecordedTarget, rollout_target
from vehicle.errors import MimicError, SimulationError
from vehicle.metrics import mse_per_axis, peak_position_error
from vehicle.state import CONTROL_LABELS, ControlKind, ControlVector, VehicleState, body_to_world
from vehicle.trajectory import Trajectory, sample_count

logger = logging.getLogger(__name__)

ARTIFACTS = ("target.csv", "platform.csv", "controls.csv", "report.csv")
CONTROL_LOG_COLUMNS = ["t", *CONTROL_LABELS, "cost", "iterations", "converged", "saturated"]

_DISTURBANCES = {
    Scenario.PITCH_DISTURBANCE: DisturbanceKind.PITCH,
    Scenario.ROLL_DISTURBANCE: DisturbanceKind.ROLL,
}


@dataclass(frozen=True)
class RunReport:
    """
    Tracking summary of one run.

    saturation_intervals maps each control channel to (start, end) pairs in
    seconds from the run start; compare_logs fills only the error fields.
    wall_time is reported on the console only, so report.csv stays byte-identical
    across repeated runs.
    """

    mse_xyz: np.ndarray
    peak_position_error: float
    saturation_intervals: dict = field(default_factory=dict)
    mean_optimizer_iterations: float = 0.0
    wall_time: float = 0.0

    def rows(self):
        """(key, value) pairs as written to report.csv."""
        rows = [(f"mse_{axis}", _number(v)) for axis, v in zip("xyz", self.mse_xyz)]
        rows.append(("peak_position_error", _number(self.peak_position_error)))
        rows.append(("mean_optimizer_iterations", _number(self.mean_optimizer_iterations)))
        for channel in CONTROL_LABELS:
            intervals = self.saturation_intervals.get(channel, ())
            rows.append((f"saturation_{channel}", ";".join(f"{a:.6g}:{b:.6g}" for a, b in intervals)))
        return rows

    @property
    def saturated(self):
        return any(self.saturation_intervals.values())


def _number(value):
    return format(float(value), ".17g")


def write_report(report, path):
    frame = pd.DataFrame(report.rows(), columns=["key", "value"])
    write_frame(frame, path)


def read_report(path):
    """report.csv as a {key: string value} mapping."""
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    return dict(zip(frame["key"], frame["value"]))


def compare_logs(a, b):
    """Position MSE per axis and peak position error between two trajectory CSVs."""
    first = load_log(a, with_controls=False)
    second = load_log(b, with_controls=False)
    return RunReport(mse_per_axis(first, second), peak_position_error(first, second))


def saturation_intervals(controls, dt, duration, lower=0.0, upper=1.0, tol=config.SATURATION_TOLERANCE):
    """
    Per-channel runs of steps whose control sits within `tol` of a bound, as
    (start, end) seconds from the run start. A step holds its control for dt.
    """
    controls = np.asarray(controls, dtype=float).reshape(-1, len(CONTROL_LABELS))
    pinned = (np.abs(controls - lower) <= tol) | (np.abs(controls - upper) <= tol)
    intervals = {}
    for i, channel in enumerate(CONTROL_LABELS):
        # edges of each run of True values
        padded = np.concatenate([[False], pinned[:, i], [False]]).astype(int)
        edges = np.flatnonzero(np.diff(padded))
        intervals[channel] = tuple(
            (start * dt, min(stop * dt, duration)) for start, stop in zip(edges[::2], edges[1::2])
        )
    return intervals


def matching_state(target_state):
    """Level platform state at the target's position, moving with its world velocity."""
    yaw = float(target_state.attitude[2])
    heading = body_to_world((0.0, 0.0, yaw))
    body_velocity = heading.T @ target_state.world_velocity()
    return VehicleState(target_state.position, body_velocity, (0.0, 0.0, yaw), np.zeros(3))


def build_target(spec):
    """Target source for the spec's scenario and the platform's initial state."""
    mpc = spec.mpc
    if spec.scenario is Scenario.HOVER:
        log = hover_log((0.0, 0.0, -spec.initial_altitude), spec.duration + mpc.horizon, mpc.control_dt)
        source = RecordedTarget(log, spec.hold_last)
        return source, VehicleState.from_vector(log.state_matrix[0])

    if spec.scenario is Scenario.LOG_REPLAY:
        log = load_log(spec.scenario_path, ControlKind.FIXED_WING)
        source = RecordedTarget(log, spec.hold_last)
        return source, matching_state(VehicleState.from_vector(log.state_matrix[0]))

    point = fixedwing.trim(spec.target, position=(0.0, 0.0, -spec.initial_altitude))
    if spec.scenario is Scenario.CUSTOM:
        schedule = load_schedule(spec.scenario_path, ControlKind.FIXED_WING)
    else:
        schedule = constant_schedule(point.control, spec.duration + mpc.horizon, mpc.physics_dt)
        schedule = disturbance_sequence(schedule, _DISTURBANCES[spec.scenario], spec.disturbance_start, mpc.physics_dt)
    source = ModelTarget(spec.target, point.state, schedule, mpc.physics_dt, spec.hold_last)
    return source, matching_state(point.state)


def _advance_plant(state, motors, control, spec):
    """Integrate the platform over one control step; the lag filter lives here only."""
    params = spec.platform
    dt = spec.mpc.physics_dt
    for _ in range(spec.mpc.physics_substeps):
        if spec.lag_enabled:
            motors = apply_lag(motors, control, dt, params.lag_time_constant)
        else:
            motors = MotorState.from_control(control)
        state = step(state, motors, params, dt)
    return state, motors


def run_experiment(spec, output_dir=None):
    """
    Run one experiment, write its artifacts and return the RunReport.

    Model errors are re-raised as SimulationError carrying the simulation time.
    """
    out = spec.resolved_output_dir(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    mpc = spec.mpc
    cdt = mpc.control_dt
    logger.info("running %s (%s, %.6g s) into %s", spec.name, spec.scenario.value, spec.duration, out)
    started = time.perf_counter()

    source, state = build_target(spec)
    t0 = source.start_time
    steps = sample_count(spec.duration, cdt)
    try:
        target = rollout_target(source, t0, steps * cdt, cdt)
    except MimicError as exc:
        raise SimulationError(f"target rollout failed: {exc}", t0) from exc

    controller = MimicController(spec.platform, mpc, warm_start=not spec.cold_start)
    hover = ControlVector.uniform(spec.platform.hover_command)
    motors = MotorState.uniform(spec.platform.hover_command)
    states = [state.to_vector()]
    rows = []
    for k in range(steps):
        now = t0 + k * cdt
        try:
            if spec.open_loop:
                control = hover
                rows.append(dict(zip(CONTROL_LOG_COLUMNS, [now, *control.channels, np.nan, 0, 0, 0])))
            else:
                control, result = controller.control_step(state, source, now, motors if mpc.model_lag else None)
                rows.append(result.to_row(now))
            state, motors = _advance_plant(state, motors, control, spec)
        except SimulationError:
            raise
        except MimicError as exc:
            raise SimulationError(str(exc), now) from exc
        states.append(state.to_vector())
        logger.debug("t=%.6g s: position %s", now + cdt, np.round(state.position, 3).tolist())

    controls_log = pd.DataFrame(rows, columns=CONTROL_LOG_COLUMNS)
    applied = controls_log[list(CONTROL_LABELS)].to_numpy(dtype=float)
    save_log(target, out / "target.csv")
    save_log(Trajectory(cdt, np.array(states), applied, t0), out / "platform.csv")
    write_frame(controls_log, out / "controls.csv")

    errors = compare_logs(out / "target.csv", out / "platform.csv")
    report = RunReport(
        mse_xyz=errors.mse_xyz,
        peak_position_error=errors.peak_position_error,
        saturation_intervals=saturation_intervals(applied, cdt, spec.duration, mpc.control_lower, mpc.control_upper),
        mean_optimizer_iterations=float(controls_log["iterations"].mean()) if len(controls_log) else 0.0,
        wall_time=time.perf_counter() - started,
    )
    write_report(report, out / "report.csv")
    logger.info(
        "%s finished in %.3g s: mse %s, peak error %.3g m",
        spec.name, report.wall_time, np.round(report.mse_xyz, 6).tolist(), report.peak_position_error,
    )
    return report
