from datetime import datetime

import numpy as np
import pandas as pd
import pytest

from dashboard.flight_path_plot import flight_path_figure
from dashboard.run_comparison import METRICS, comparison_figure, comparison_frame
from dashboard.summary_dashboard import control_figure, error_gauge, position_figure, saturation_spans
from docs.documentation import CSV_COLUMNS, FILES, column_table
from experiments.harness import RunReport, run_experiment, write_report
from experiments.spec import ExperimentSpec, Scenario
from reports.pdf_generator import generate_pdf
from utils.helpers import format_sig, list_runs, load_run, style_saturated_row


@pytest.fixture(scope="module")
def run_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("runs")
    run_experiment(ExperimentSpec(name="still", scenario=Scenario.HOVER, duration=1.0, open_loop=True), root / "still")
    return root


@pytest.fixture
def run(run_root):
    return load_run(run_root / "still")


def test_list_runs_skips_incomplete_directories(run_root, tmp_path):
    (run_root / "partial").mkdir(exist_ok=True)
    assert [p.name for p in list_runs(run_root)] == ["still"]
    assert list_runs(tmp_path / "nowhere") == []


def test_load_run(run):
    assert run.name == "still"
    assert len(run.target) == 11
    assert len(run.controls) == 10
    assert run.report["saturation_c0"] == ""


def test_format_sig():
    assert format_sig(0.123456789) == "0.123457"
    assert format_sig("1e-7") == "1e-07"
    assert format_sig(None) == "None"


def test_saturated_rows_are_highlighted():
    assert style_saturated_row(pd.Series({"c0": 1.0, "saturated": 3})) == ["background-color: #EB8C71"] * 2
    assert style_saturated_row(pd.Series({"c0": 0.5, "saturated": 0})) == ["", ""]


def test_position_figure_draws_target_dashed(run):
    fig = position_figure(run, "z")
    assert [trace.name for trace in fig.data] == ["target", "platform"]
    assert fig.data[0].line.dash == "dash"
    assert fig.data[1].line.dash is None


def test_saturation_spans_parse_the_report():
    report = {"saturation_c0": "0.5:1.25;3:4", "saturation_c2": "2:2.5"}
    assert saturation_spans(report) == [("c0", 0.5, 1.25), ("c0", 3.0, 4.0), ("c2", 2.0, 2.5)]


def test_control_figure_shades_saturation(run):
    shaded = run.__class__(run.name, run.target, run.platform, run.controls,
                           {**run.report, "saturation_c1": "0:0.3"})
    assert len(control_figure(run).layout.shapes) == 0
    fig = control_figure(shaded)
    assert len(fig.data) == 4
    assert len(fig.layout.shapes) == 1


def test_error_gauge_range_covers_the_value():
    gauge = error_gauge("2.5")
    assert gauge.data[0].value == 2.5
    assert list(gauge.data[0].gauge.axis.range) == [0, 2.5]


def test_flight_path_uses_altitude_up(run):
    fig = flight_path_figure(run.target, run.platform, highlight_time=0.5)
    assert len(fig.data) == 4
    assert np.allclose(fig.data[0].z, 100.0)
    assert fig.data[0].line.dash == "dash"


def test_comparison_frame(run_root, tmp_path):
    other = tmp_path / "other"
    other.mkdir()
    for name in ("target.csv", "platform.csv", "controls.csv"):
        (other / name).write_bytes((run_root / "still" / name).read_bytes())
    write_report(RunReport(np.array([0.5, 0.25, 0.125]), 1.5, mean_optimizer_iterations=7.0), other / "report.csv")
    frame = comparison_frame([load_run(run_root / "still"), load_run(other)])
    assert list(frame.columns) == ["Run", *METRICS]
    assert frame.loc[1, "mse_z"] == 0.125
    assert frame.loc[1, "mean_optimizer_iterations"] == 7.0
    fig = comparison_figure(frame, ["mse_x", "mse_y"])
    assert [trace.name for trace in fig.data] == [METRICS["mse_x"], METRICS["mse_y"]]


def test_every_artifact_column_is_documented():
    for columns in FILES.values():
        assert all(name in CSV_COLUMNS for name in columns)
    assert column_table(["t"]) == "| `t` | time [s] |"


def test_pdf_report(run):
    buffer = generate_pdf(run.name, run.report, generated=datetime(2024, 1, 2, 3, 4, 5))
    assert buffer.read(5) == b"%PDF-"
