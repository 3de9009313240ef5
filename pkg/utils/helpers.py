# utils/helpers.py
from dataclasses import dataclass
from pathlib import Path

import pandas as pd
import streamlit as st

import config
from experiments.harness import ARTIFACTS, read_report


@dataclass(frozen=True)
class RunArtifacts:
    name: str
    target: pd.DataFrame
    platform: pd.DataFrame
    controls: pd.DataFrame
    report: dict


def format_sig(value, digits=config.PRINT_DIGITS):
    """Number with `digits` significant digits; non-numbers pass through."""
    try:
        return f"{float(value):.{digits}g}"
    except (TypeError, ValueError):
        return str(value)


def list_runs(root):
    """Sub-directories of `root` holding a complete set of run artifacts."""
    root = Path(root)
    if not root.is_dir():
        return []
    return sorted(p for p in root.iterdir() if p.is_dir() and all((p / name).is_file() for name in ARTIFACTS))


def load_run(run_dir):
    run_dir = Path(run_dir)
    return RunArtifacts(
        name=run_dir.name,
        target=pd.read_csv(run_dir / "target.csv"),
        platform=pd.read_csv(run_dir / "platform.csv"),
        controls=pd.read_csv(run_dir / "controls.csv"),
        report=read_report(run_dir / "report.csv"),
    )


def style_saturated_row(row):
    return ['background-color: #EB8C71' if row.get("saturated", 0) else '' for _ in row]


def add_sidebar_navigation():
    st.sidebar.markdown("""
    ## Navigation
    - [Dashboard](#dashboard)
    - [Flight Path](#flight-path)
    - [Run Comparison](#run-comparison)
    - [Documentation](#documentation)
    """, unsafe_allow_html=True)
