"""
Experiment UI components for the application.

This module renders the experiment picker, the JSON config editor and the
result views for whichever experiment is selected in the sidebar.
"""
import json
from typing import Any, Dict, Optional

import pandas as pd
import streamlit as st

from ..core.exceptions import SimulationToolkitError
from ..core.state import get_config, get_result, set_config, set_result
from ..experiments.registry import registry
from ..services.export import FLOAT_FORMAT, to_json


def render_experiment_selector() -> str:
    """
    Render the experiment selector dropdown in the sidebar.

    Returns:
        Name of the selected experiment
    """
    descriptions = registry.describe()
    names = list(descriptions)
    current = st.session_state.current_experiment
    index = names.index(current) if current in names else 0

    selected = st.sidebar.selectbox(
        "Experiment",
        names,
        index=index,
        format_func=lambda name: name,
    )
    st.sidebar.caption(descriptions[selected])
    st.sidebar.markdown("---")

    if selected != current:
        st.session_state.current_experiment = selected
    return selected


def render_config_editor(name: str) -> Optional[Dict[str, Any]]:
    """
    Render a JSON editor prefilled with the experiment's defaults.

    Returns:
        The parsed document, or None when the text is not valid JSON
    """
    document = get_config(name)
    if document is None:
        document = registry.create(name).default_config()
        set_config(name, document)

    text = st.sidebar.text_area("Config (JSON)", to_json(document), height=360, key=f"config_{name}")
    if st.sidebar.button("Reset to defaults"):
        set_config(name, registry.create(name).default_config())
        st.rerun()

    try:
        parsed = json.loads(text)
    except json.JSONDecodeError as e:
        st.sidebar.error(f"Invalid JSON: {e.msg} (line {e.lineno})")
        return None
    set_config(name, parsed)
    return parsed


def run_experiment(name: str, document: Dict[str, Any]) -> None:
    """Run the experiment in the script thread with a live progress bar"""
    status_text = st.empty()
    progress_bar = st.progress(0.0)

    def update_status_display(status: str, progress: float):
        status_text.text(status)
        progress_bar.progress(progress)

    experiment = registry.create(name)
    experiment.set_status_callback(update_status_display)
    try:
        with st.spinner(f"Running {name}..."):
            result = experiment.run_document(document)
    except SimulationToolkitError as e:
        st.error(str(e))
        return
    set_result(name, result)


def render_result(name: str) -> None:
    """Render the summary, main table, chart and downloads of the last run"""
    result = get_result(name)
    if result is None:
        st.info("Edit the config in the sidebar and press Run.")
        return

    st.subheader("Summary")
    st.json(result.summary)

    chart = _chart_frame(name, result.table)
    if chart is not None:
        st.subheader("Chart")
        st.line_chart(chart)

    st.subheader("Results")
    st.dataframe(result.table, use_container_width=True)
    st.download_button(
        "Download CSV",
        result.table.to_csv(index=False, float_format=FLOAT_FORMAT),
        file_name=f"{name}.csv",
        mime="text/csv",
    )
    for table_name, frame in result.extra_tables.items():
        with st.expander(table_name):
            st.dataframe(frame, use_container_width=True)


def _chart_frame(name: str, table: pd.DataFrame) -> Optional[pd.DataFrame]:
    """Pick a small frame worth plotting for each experiment"""
    if table.empty:
        return None
    if name == "interp-error":
        return table.pivot_table(index="n_d", columns="method", values="value_error")
    if name == "eps-sweep":
        return table.pivot_table(index="epsilon", columns="n_d", values="value_error")
    if name == "stokeslet-test":
        return table.reset_index(drop=True)[["p_error", "u_error", "v_error"]]
    if name == "simulate":
        final = table[table["t"] == table["t"].max()]
        return final.set_index("x")[["y"]].sort_index()
    if name == "fd-baseline":
        return table.set_index("n_s")[["max_tangent_error"]]
    return None


def render_experiment_ui() -> None:
    """Render the selector, editor and results for the current experiment"""
    st.title("RBF Stokeslets")
    name = render_experiment_selector()
    document = render_config_editor(name)

    st.header(name)
    if st.sidebar.button("Run", type="primary", disabled=document is None):
        run_experiment(name, document)
    render_result(name)
