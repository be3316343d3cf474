"""
UI components for the RBF-Stokeslets application.

This package contains the Streamlit components for picking an experiment,
editing its config and showing its results.
"""
