import numpy as np
import plotly.graph_objs as go
import streamlit as st

from utils.helpers import format_sig, style_saturated_row
from vehicle.state import CONTROL_LABELS

AXES = ("x", "y", "z")
TARGET_COLOR = "#00303C"
PLATFORM_COLOR = "#00A3AD"
CHANNEL_COLORS = ("#00303C", "#00A3AD", "#88DBDF", "#636669")


def position_figure(run, axis):
    """Target (dashed) against platform (solid) along one world axis."""
    fig = go.Figure()
    fig.add_trace(go.Scatter(
        x=run.target["t"], y=run.target[axis], name="target",
        line=dict(color=TARGET_COLOR, dash="dash"),
    ))
    fig.add_trace(go.Scatter(
        x=run.platform["t"], y=run.platform[axis], name="platform",
        line=dict(color=PLATFORM_COLOR),
    ))
    fig.update_layout(
        title=f"{axis} position",
        xaxis_title="time [s]",
        yaxis_title=f"{axis} [m] (NED)",
        height=300,
        margin=dict(l=10, r=10, t=50, b=10),
    )
    return fig


def saturation_spans(report):
    """(channel, start, end) triples from the report's saturation_<channel> entries."""
    spans = []
    for channel in CONTROL_LABELS:
        text = report.get(f"saturation_{channel}", "")
        for item in filter(None, text.split(";")):
            start, end = item.split(":")
            spans.append((channel, float(start), float(end)))
    return spans


def control_figure(run):
    """Motor commands per channel, saturated intervals shaded."""
    fig = go.Figure()
    for channel, color in zip(CONTROL_LABELS, CHANNEL_COLORS):
        fig.add_trace(go.Scatter(
            x=run.controls["t"], y=run.controls[channel], name=channel,
            line=dict(color=color, shape="hv"),
        ))
    t0 = float(run.controls["t"].iloc[0]) if len(run.controls) else 0.0
    for _, start, end in saturation_spans(run.report):
        fig.add_vrect(x0=t0 + start, x1=t0 + end, fillcolor="#EB8C71", opacity=0.2, line_width=0)
    fig.update_layout(
        title="Motor commands",
        xaxis_title="time [s]",
        yaxis=dict(title="command", range=[-0.05, 1.05]),
        height=300,
        margin=dict(l=10, r=10, t=50, b=10),
    )
    return fig


def error_gauge(peak_error, limit=1.0):
    peak_error = float(peak_error)
    gauge = go.Figure(go.Indicator(
        mode="gauge+number",
        value=peak_error,
        title={"text": "Peak position error (m)"},
        gauge={
            "axis": {"range": [0, max(limit, peak_error)]},
            "bar": {"color": "#EB8C71"},
            "steps": [
                {"range": [0, 0.1 * limit], "color": "#E7F8F9"},
                {"range": [0.1 * limit, 0.5 * limit], "color": "#B8E9EC"},
                {"range": [0.5 * limit, max(limit, peak_error)], "color": "#88DBDF"},
            ],
        },
    ))
    gauge.update_layout(height=250, margin=dict(l=10, r=10, t=50, b=10))
    return gauge


def render_dashboard(run):
    """Render the summary view of one run."""
    st.markdown("<a name='dashboard'></a>", unsafe_allow_html=True)
    st.title(f"Run Dashboard: {run.name}")

    col1, col2 = st.columns(2)
    with col1:
        st.subheader("Tracking")
        report = run.report
        st.markdown(
            f"""
            <div style="padding: 15px; border-radius: 5px; border: 1px solid #ddd; background-color: #f9f9f9;">
                <p><strong>MSE x / y / z (m²):</strong> {' / '.join(format_sig(report.get(f'mse_{a}')) for a in AXES)}</p>
                <p><strong>Mean optimizer iterations:</strong> {format_sig(report.get('mean_optimizer_iterations'))}</p>
            </div>
            """,
            unsafe_allow_html=True,
        )
        st.plotly_chart(error_gauge(report.get("peak_position_error", np.nan)), use_container_width=True)
    with col2:
        st.subheader("Controls")
        st.plotly_chart(control_figure(run), use_container_width=True)

    for axis in AXES:
        st.plotly_chart(position_figure(run, axis), use_container_width=True)

    with st.expander("Controller log"):
        st.dataframe(run.controls.style.apply(style_saturated_row, axis=1))
    st.markdown("---")
