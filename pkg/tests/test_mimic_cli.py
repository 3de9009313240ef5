import numpy as np
import pytest

import config
from dynamics.fixedwing import FixedWingParams, trim
from experiments.fixtures import hover_log
from mimic import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, cli_main
from target.disturbances import constant_schedule
from target.logs import load_log, save_log, save_schedule
from vehicle.state import ControlKind, ControlVector
from vehicle.trajectory import Trajectory


@pytest.fixture
def empty_config(tmp_path):
    path = tmp_path / "params.cfg"
    path.write_text("# defaults\n")
    return path


def test_version(capsys):
    assert cli_main(["version"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == config.VERSION


def test_missing_subcommand_is_a_usage_error(capsys):
    assert cli_main([]) == EXIT_USAGE
    assert "usage:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["fly"], ["--fast", "version"], ["compare", "only-one.csv"]])
def test_usage_errors(argv, capsys):
    assert cli_main(argv) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_missing_spec_is_a_runtime_error(tmp_path, capsys):
    assert cli_main(["run", str(tmp_path / "missing.spec")]) == EXIT_RUNTIME
    assert "mimic run" in capsys.readouterr().err


def test_invalid_spec_is_a_runtime_error(tmp_path):
    path = tmp_path / "bad.spec"
    path.write_text("scenario = sideways\n")
    assert cli_main(["run", str(path)]) == EXIT_RUNTIME


def test_compare_identical_logs(tmp_path, capsys):
    path = tmp_path / "hover.csv"
    save_log(hover_log(), path)
    assert cli_main(["compare", str(path), str(path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "mse_x: 0\n" in out
    assert "peak_position_error: 0\n" in out


def test_compare_prints_six_significant_digits(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    save_log(hover_log((0.0, 0.0, -100.0), duration=1.0), a)
    save_log(hover_log((1.0 / 3.0, 0.0, -100.0), duration=1.0), b)
    assert cli_main(["compare", str(a), str(b)]) == EXIT_OK
    assert "mse_x: 0.111111\n" in capsys.readouterr().out


def test_fixture_writes_a_loadable_log(tmp_path):
    path = tmp_path / "hover.csv"
    assert cli_main(["--quiet", "fixture", "hover", str(path)]) == EXIT_OK
    assert len(load_log(path).state_matrix) == 101


def test_sim_mr_hover_schedule_stays_put(tmp_path, empty_config):
    controls = tmp_path / "controls.csv"
    save_schedule(constant_schedule(ControlVector.uniform(0.5), 1.0, 0.1), controls)
    argv = ["--output-dir", str(tmp_path / "out"), "sim-mr", str(empty_config), str(controls)]
    assert cli_main(argv) == EXIT_OK
    result = load_log(tmp_path / "out" / "sim-mr.csv")
    assert len(result.state_matrix) == 12
    assert np.max(np.abs(result.positions)) < 1e-9


def test_sim_mr_rejects_out_of_range_commands(tmp_path, empty_config):
    controls = tmp_path / "controls.csv"
    wing = Trajectory(0.1, None, [[-0.5, 0.0, 0.5, 0.0]] * 3, control_kind=ControlKind.FIXED_WING)
    save_schedule(wing, controls)
    assert cli_main(["sim-mr", str(empty_config), str(controls)]) == EXIT_RUNTIME


def test_sim_fw_from_trim(tmp_path, empty_config):
    point = trim(FixedWingParams())
    controls = tmp_path / "controls.csv"
    save_schedule(constant_schedule(point.control, 1.0, 0.1), controls)
    argv = ["--output-dir", str(tmp_path), "sim-fw", str(empty_config), str(controls)]
    assert cli_main(argv) == EXIT_OK
    result = load_log(tmp_path / "sim-fw.csv", ControlKind.FIXED_WING)
    assert len(result.state_matrix) == 12
    assert result.positions[-1, 0] == pytest.approx(18.0 * 1.1, rel=0.01)


def test_run_writes_artifacts_under_the_spec_name(tmp_path, capsys):
    spec = tmp_path / "short.spec"
    spec.write_text("name = short\nscenario = hover\nduration = 0.5\nopen_loop = true\n")
    assert cli_main(["--output-dir", str(tmp_path / "runs"), "run", str(spec)]) == EXIT_OK
    assert (tmp_path / "runs" / "short" / "report.csv").is_file()
    assert "short: artifacts in" in capsys.readouterr().out
