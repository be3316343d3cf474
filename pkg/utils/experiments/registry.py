"""
Experiment registry for the application.

This module provides a registry for all available experiments.
"""
from typing import Dict, List

from .base import Experiment
from .jobs import (
    EpsSweepExperiment,
    FdBaselineExperiment,
    InterpErrorExperiment,
    SimulateExperiment,
    StokesletTestExperiment,
)


class ExperimentRegistry:
    """Registry for all available experiments."""

    def __init__(self):
        """Initialize the experiment registry."""
        self._experiments: Dict[str, type] = {}
        self._register_default_experiments()

    def _register_default_experiments(self) -> None:
        """Register the built-in experiments."""
        for experiment in (
            InterpErrorExperiment,
            EpsSweepExperiment,
            StokesletTestExperiment,
            SimulateExperiment,
            FdBaselineExperiment,
        ):
            self.register(experiment)

    def register(self, experiment: type) -> None:
        """
        Register a new experiment class.

        Args:
            experiment: Experiment subclass with a unique ``name``
        """
        self._experiments[experiment.name] = experiment

    def create(self, name: str) -> Experiment:
        """
        Create a fresh experiment instance by name.

        Each run gets its own instance so status callbacks never cross between
        concurrent runs.

        Raises:
            KeyError: If no experiment with the given name exists
        """
        return self._experiments[name]()

    def names(self) -> List[str]:
        return list(self._experiments)

    def describe(self) -> Dict[str, str]:
        return {name: cls.description for name, cls in self._experiments.items()}


# Create a singleton instance
registry = ExperimentRegistry()
