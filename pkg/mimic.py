"""
mimic.py

Command-line entry point.

    python mimic.py [--output-dir DIR] [--horizon S] [--control-dt S] [--lag] [--quiet] COMMAND ...

Commands: run, compare, sim-mr, sim-fw, fixture, version. Exit status 0 on
success, 1 on usage errors, 2 on runtime errors. Numbers on the console use
six significant digits; machine-readable results go to CSV files only.
"""

import argparse
import dataclasses
import logging
import sys
from pathlib import Path

import numpy as np

import config
from dynamics import fixedwing
from dynamics.fixedwing import FixedWingParams
from dynamics.multirotor import MotorState, MultiRotorParams, rollout
from experiments.fixtures import FIXTURES, build_fixture
from experiments.harness import compare_logs, run_experiment
from experiments.spec import ExperimentSpec
from target.logs import load_schedule, save_log
from vehicle.errors import MimicError
from vehicle.state import ControlKind, VehicleState
from vehicle.trajectory import Trajectory

logger = logging.getLogger("mimic")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

# physics step used by the open-loop simulators
PHYSICS_DT = config.MPC_DEFAULTS["control_dt"] / config.MPC_DEFAULTS["physics_substeps"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage().strip()}\n{self.prog}: error: {message}")


def build_parser():
    parser = _Parser(prog="mimic", description="Make a multi-rotor mimic a fixed-wing target.")
    parser.add_argument("--output-dir", type=Path, help=f"artifact directory (default ${config.OUTPUT_DIR_ENV} or ./runs)")
    parser.add_argument("--horizon", type=float, help="controller horizon [s]")
    parser.add_argument("--control-dt", type=float, help="controller step [s]")
    parser.add_argument("--lag", action="store_true", help="enable the first-order motor lag on the platform plant")
    parser.add_argument("--quiet", action="store_true", help="only log warnings and errors")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    run = commands.add_parser("run", help="run an experiment spec file")
    run.add_argument("spec", type=Path)

    compare = commands.add_parser("compare", help="tracking error between two trajectory CSVs")
    compare.add_argument("a", type=Path)
    compare.add_argument("b", type=Path)

    sim_mr = commands.add_parser("sim-mr", help="open-loop multi-rotor simulation of a control schedule")
    sim_mr.add_argument("config", type=Path, help="multi-rotor parameter file")
    sim_mr.add_argument("controls", type=Path, help="t,c0..c3 schedule (motor commands)")

    sim_fw = commands.add_parser("sim-fw", help="open-loop fixed-wing simulation of a control schedule")
    sim_fw.add_argument("config", type=Path, help="fixed-wing parameter file")
    sim_fw.add_argument("controls", type=Path, help="t,c0..c3 schedule (aileron, elevator, throttle, rudder)")

    fixture = commands.add_parser("fixture", help="write a shipped target trajectory")
    fixture.add_argument("name", choices=FIXTURES)
    fixture.add_argument("path", type=Path, nargs="?")

    commands.add_parser("version", help="print the version")
    return parser


def _fmt(value):
    return f"{value:.{config.PRINT_DIGITS}g}"


def _print_report(report, full=True):
    for axis, value in zip("xyz", report.mse_xyz):
        print(f"mse_{axis}: {_fmt(value)}")
    print(f"peak_position_error: {_fmt(report.peak_position_error)}")
    if full:
        print(f"mean_optimizer_iterations: {_fmt(report.mean_optimizer_iterations)}")
        print(f"wall_time: {_fmt(report.wall_time)}")
        for channel, intervals in report.saturation_intervals.items():
            if intervals:
                spans = ", ".join(f"{_fmt(a)}-{_fmt(b)}" for a, b in intervals)
                print(f"saturated {channel}: {spans}")


def _output_dir(args):
    return args.output_dir if args.output_dir is not None else config.default_output_dir()


def _cmd_run(args):
    spec = ExperimentSpec.from_file(args.spec)
    mpc = spec.mpc
    if args.horizon is not None or args.control_dt is not None:
        mpc = dataclasses.replace(
            mpc,
            horizon=args.horizon if args.horizon is not None else mpc.horizon,
            control_dt=args.control_dt if args.control_dt is not None else mpc.control_dt,
        )
    spec = dataclasses.replace(spec, mpc=mpc, lag_enabled=spec.lag_enabled or args.lag)
    output_dir = args.output_dir / spec.name if args.output_dir is not None else None
    report = run_experiment(spec, output_dir)
    print(f"{spec.name}: artifacts in {spec.resolved_output_dir(output_dir)}")
    _print_report(report)


def _cmd_compare(args):
    _print_report(compare_logs(args.a, args.b), full=False)


def _substeps(dt):
    return max(1, int(round(dt / PHYSICS_DT)))


def _print_final(name, state, path):
    print(f"{name}: wrote {path}")
    print("final position: " + ", ".join(_fmt(v) for v in state.position))
    print("final attitude: " + ", ".join(_fmt(v) for v in state.attitude))


def _cmd_sim_mr(args):
    params = MultiRotorParams.from_file(args.config)
    schedule = load_schedule(args.controls, ControlKind.MULTI_ROTOR)
    start = VehicleState.at_rest()
    motors = MotorState(schedule.control_matrix[0])
    states = rollout(start, schedule.control_matrix, params, schedule.dt,
                     _substeps(schedule.dt), motors, use_lag=args.lag)
    out = _output_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sim-mr.csv"
    save_log(Trajectory(schedule.dt, states, schedule.control_matrix, schedule.start_time), path)
    _print_final("sim-mr", VehicleState.from_vector(states[-1]), path)


def _cmd_sim_fw(args):
    params = FixedWingParams.from_file(args.config)
    schedule = load_schedule(args.controls, ControlKind.FIXED_WING)
    point = fixedwing.trim(params)
    substeps = _substeps(schedule.dt)
    fine = np.repeat(schedule.control_matrix, substeps, axis=0)
    states = fixedwing.simulate(point.state, fine, params, schedule.dt / substeps)[::substeps]
    out = _output_dir(args)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sim-fw.csv"
    save_log(Trajectory(schedule.dt, states, schedule.control_matrix, schedule.start_time,
                        ControlKind.FIXED_WING), path)
    _print_final("sim-fw", VehicleState.from_vector(states[-1]), path)


def _cmd_fixture(args):
    path = args.path or _output_dir(args) / f"{args.name}.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    traj = build_fixture(args.name, dt=args.control_dt or config.MPC_DEFAULTS["control_dt"])
    save_log(traj, path)
    print(f"fixture {args.name}: {len(traj.state_matrix)} samples written to {path}")


def _cmd_version(args):
    print(config.VERSION)


COMMANDS = {
    "run": _cmd_run,
    "compare": _cmd_compare,
    "sim-mr": _cmd_sim_mr,
    "sim-fw": _cmd_sim_fw,
    "fixture": _cmd_fixture,
    "version": _cmd_version,
}


def cli_main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # --help
        return EXIT_OK if not exc.code else EXIT_USAGE

    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        COMMANDS[args.command](args)
    except (MimicError, OSError, ValueError) as exc:
        logger.debug("command failed", exc_info=True)
        print(f"mimic {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(cli_main())
