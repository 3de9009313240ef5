import pandas as pd
import plotly.graph_objs as go
import streamlit as st

from utils.helpers import load_run

METRICS = {
    "mse_x": "MSE x (m²)",
    "mse_y": "MSE y (m²)",
    "mse_z": "MSE z (m²)",
    "peak_position_error": "Peak position error (m)",
    "mean_optimizer_iterations": "Mean optimizer iterations",
}


def comparison_frame(runs):
    """One row per run, one numeric column per report metric."""
    rows = []
    for run in runs:
        row = {"Run": run.name}
        row.update({key: float(run.report.get(key, "nan") or "nan") for key in METRICS})
        rows.append(row)
    return pd.DataFrame(rows, columns=["Run", *METRICS])


def comparison_figure(frame, metrics):
    fig = go.Figure()
    for key in metrics:
        fig.add_trace(go.Bar(
            x=frame["Run"],
            y=frame[key],
            name=METRICS[key],
            text=frame[key].map(lambda v: f"{v:.3g}"),
            textposition="auto",
        ))
    fig.update_layout(
        title="Run comparison",
        xaxis_title="Run",
        barmode="group",
        legend_title="Metric",
    )
    return fig


def render_run_comparison(run_dirs):
    """Render the Run Comparison section across the available run directories."""
    st.markdown("<a name='run-comparison'></a>", unsafe_allow_html=True)
    st.title("Run Comparison")

    names = [d.name for d in run_dirs]
    selected = st.multiselect("Select runs to compare:", names, default=names[:2])
    metrics = st.multiselect(
        "Select metrics:",
        list(METRICS),
        default=["mse_x", "mse_y", "mse_z"],
        format_func=METRICS.get,
    )

    if selected and metrics:
        runs = [load_run(d) for d in run_dirs if d.name in selected]
        frame = comparison_frame(runs)
        st.plotly_chart(comparison_figure(frame, metrics), use_container_width=True)

        st.subheader("Comparison Data Table")
        st.dataframe(frame.set_index("Run")[metrics])
    else:
        st.warning("Select at least one run and one metric.")

    st.markdown("---")
