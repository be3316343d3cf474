"""
Core functionality for the RBF-Stokeslets application.

This package contains core application components like configuration,
exception handling, status reporting and session state management.
"""
