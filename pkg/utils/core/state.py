"""Session state management utilities for shared application state"""
from typing import Any, Dict, Optional

import streamlit as st


def initialize_session_state():
    """Initialize shared session state variables"""
    # Experiment selected in the sidebar
    if 'current_experiment' not in st.session_state:
        st.session_state.current_experiment = None

    # Edited config documents, one per experiment name
    if 'configs' not in st.session_state:
        st.session_state.configs = {}

    # Latest result per experiment name
    if 'results' not in st.session_state:
        st.session_state.results = {}


def get_config(name: str) -> Optional[Dict[str, Any]]:
    return st.session_state.configs.get(name)


def set_config(name: str, document: Dict[str, Any]):
    st.session_state.configs[name] = document


def get_result(name: str):
    """Get the last result of an experiment or None"""
    return st.session_state.results.get(name)


def set_result(name: str, result):
    st.session_state.results[name] = result
