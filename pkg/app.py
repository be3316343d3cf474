import streamlit as st

from utils.core.config import configure_logging
from utils.core.exceptions import ConfigurationError
from utils.core.state import initialize_session_state
from utils.ui.experiment_ui import render_experiment_ui

st.set_page_config(page_title="RBF Stokeslets", page_icon="🌀", layout="wide")

try:
    configure_logging()
except ConfigurationError as e:
    st.error(f"⚠️ {e}")
    st.stop()

# Initialize session state
initialize_session_state()

render_experiment_ui()
