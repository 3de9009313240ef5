# mimic-viewer.py
import streamlit as st

import config
from dashboard.flight_path_plot import render_flight_path
from dashboard.run_comparison import render_run_comparison
from dashboard.summary_dashboard import render_dashboard
from docs.documentation import render_documentation
from reports.pdf_generator import pdf_download_button
from utils.helpers import add_sidebar_navigation, list_runs, load_run

st.set_page_config(page_title="Platform Mimic Viewer", layout="wide")

root = st.sidebar.text_input("Runs directory:", str(config.default_output_dir()))
run_dirs = list_runs(root)

if not run_dirs:
    st.warning(f"No complete runs under {root}. Create one with `python mimic.py run <spec>`.")
    render_documentation()
    st.stop()

selected = st.sidebar.selectbox("Run:", [d.name for d in run_dirs])
run = load_run(next(d for d in run_dirs if d.name == selected))

render_dashboard(run)
render_flight_path(run)
render_run_comparison(run_dirs)
render_documentation()
pdf_download_button(run)

add_sidebar_navigation()

with st.sidebar.expander("About this Tool"):
    st.markdown(f"""
    **Platform Mimic Tool v{config.VERSION}**

    Browse closed-loop runs in which a multi-rotor platform follows the
    trajectory of a fixed-wing target under a receding-horizon controller.
    """)

st.markdown("---")
st.markdown(
    f"""
    <div style="text-align: center; color: gray; font-size: 0.8em;">
        Platform Mimic Tool v{config.VERSION} | Runs read from {root}
    </div>
    """,
    unsafe_allow_html=True
)
