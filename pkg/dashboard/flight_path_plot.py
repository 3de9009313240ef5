"""
dashboard/flight_path_plot.py

This module renders the "Flight Path" section of the run viewer: the target
and platform trajectories as 3D lines (altitude up), with a marker showing
both vehicles at a user-selected time.
"""

import numpy as np
import plotly.graph_objs as go
import streamlit as st


def _path_trace(frame, name, color, dash=None):
    return go.Scatter3d(
        x=frame["x"],
        y=frame["y"],
        z=-frame["z"],
        mode="lines",
        line=dict(color=color, width=5, dash=dash),
        name=name,
        hovertemplate="t: %{customdata:.2f} s<br>x: %{x:.2f} m<br>y: %{y:.2f} m<br>alt: %{z:.2f} m",
        customdata=frame["t"],
    )


def flight_path_figure(target, platform, highlight_time=None):
    """3D paths of target (dashed) and platform (solid); altitude is -z."""
    traces = [
        _path_trace(target, "target", "#00303C", dash="dash"),
        _path_trace(platform, "platform", "#00A3AD"),
    ]
    if highlight_time is not None:
        for frame, name in ((target, "target"), (platform, "platform")):
            row = frame.iloc[int(np.abs(frame["t"].to_numpy() - highlight_time).argmin())]
            traces.append(go.Scatter3d(
                x=[row["x"]], y=[row["y"]], z=[-row["z"]],
                mode="markers",
                marker=dict(size=8, color="red"),
                name=f"{name} at {highlight_time:.2f} s",
            ))
    fig = go.Figure(data=traces)
    fig.update_layout(
        scene=dict(
            xaxis=dict(title="x north [m]"),
            yaxis=dict(title="y east [m]"),
            zaxis=dict(title="altitude [m]"),
            aspectmode="data",
        ),
        margin=dict(l=0, r=0, b=0, t=0),
    )
    return fig


def render_flight_path(run):
    st.markdown("<a name='flight-path'></a>", unsafe_allow_html=True)
    st.title("Flight Path")

    times = run.platform["t"]
    selected = st.slider(
        "Time (s):",
        min_value=float(times.min()),
        max_value=float(times.max()),
        value=float(times.min()),
    )
    st.plotly_chart(flight_path_figure(run.target, run.platform, selected), use_container_width=True)
