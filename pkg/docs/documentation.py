"""
docs/documentation.py

This module renders the documentation section of the run viewer: the models,
the controller cost and the columns of every CSV file a run writes.
"""

import streamlit as st

from experiments.harness import CONTROL_LOG_COLUMNS
from target.logs import CONTROL_COLUMNS, STATE_COLUMNS

# Column descriptions shared by the viewer and the README.
CSV_COLUMNS = {
    "t": "time [s]",
    "x": "north position [m]",
    "y": "east position [m]",
    "z": "down position [m] (altitude = -z)",
    "u": "body forward velocity [m/s]",
    "v": "body right velocity [m/s]",
    "w": "body down velocity [m/s]",
    "roll": "roll angle [rad], wrapped to [-pi, pi)",
    "pitch": "pitch angle [rad], within (-pi/2, pi/2)",
    "yaw": "yaw angle [rad], wrapped to [-pi, pi)",
    "p": "body roll rate [rad/s]",
    "q": "body pitch rate [rad/s]",
    "r": "body yaw rate [rad/s]",
    "c0": "motor 0 (front right) command, or aileron for fixed-wing files",
    "c1": "motor 1 (rear left) command, or elevator",
    "c2": "motor 2 (front left) command, or throttle",
    "c3": "motor 3 (rear right) command, or rudder",
    "cost": "optimized horizon cost (empty for open-loop runs)",
    "iterations": "optimizer iterations for this step",
    "converged": "1 when the optimizer met its tolerances",
    "saturated": "bitmask of channels on a bound (bit i = channel ci)",
}

FILES = {
    "target.csv": STATE_COLUMNS,
    "platform.csv": STATE_COLUMNS + CONTROL_COLUMNS,
    "controls.csv": CONTROL_LOG_COLUMNS,
}


def column_table(columns):
    return "\n".join(f"| `{name}` | {CSV_COLUMNS[name]} |" for name in columns)


def render_documentation():
    """Render the Documentation section for the run viewer."""
    st.markdown("<a name='documentation'></a>", unsafe_allow_html=True)
    st.title("Documentation")

    st.markdown(
        r"""
**Platform model:**

Four motors in an X layout, each producing $$ T_i = c_i \, T_{max} $$ along body $$ -z $$.
Linear drag, gravity rotated into the body frame, and an optional first-order
motor lag on the plant only:
$$
y_t = (1 - a)\, y_{t-1} + a\, u_t, \qquad a = \frac{\Delta t}{\Delta t + T_{lag}}
$$

**Integration:** velocities and rates first, then position and attitude from the
updated values (two-step Euler).

**Controller cost** over $$ N $$ control steps:
$$
J(u) = \sum_{t=1}^{N} \sum_k w_k \left(\hat{x}_t[k] - x^{tar}_t[k]\right)^2 + \lambda \sum_{t=1}^{N} \lVert u_t \rVert^2
$$

Only the first control of the optimized sequence is applied; the rest, shifted
by one step, seeds the next solve.
        """,
        unsafe_allow_html=True,
    )

    for name, columns in FILES.items():
        st.subheader(name)
        st.markdown("| column | meaning |\n|---|---|\n" + column_table(columns))

    st.subheader("report.csv")
    st.markdown(
        """
`key,value` rows: `mse_x`, `mse_y`, `mse_z` (m²), `peak_position_error` (m),
`mean_optimizer_iterations` and `saturation_c0` ... `saturation_c3`
holding `start:end` intervals in seconds from the run start, separated by `;`.

**Notes:**

- Plot target traces dashed and platform traces solid.
- `controls.csv` is itself a valid control schedule for `sim-mr`.
- No real flight data ships with the tool. The climbing-turn log is synthetic;
  replay your own logs with a `LogReplay` spec or check them with `compare`.
        """
    )
