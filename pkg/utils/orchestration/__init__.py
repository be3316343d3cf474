"""
Orchestration components for the RBF-Stokeslets application.

This package contains the logic for running several independent experiments
concurrently and routing their status updates.
"""
from .orchestrator import ExperimentOrchestrator

__all__ = ['ExperimentOrchestrator']
