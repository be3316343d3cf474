"""
Custom exceptions for the RBF-Stokeslets application.

This module defines custom exception classes for different types of errors
that can occur in the application, making error handling more specific and informative.
"""
from typing import Any, Dict, List, Optional


class SimulationToolkitError(Exception):
    """Base exception class for all toolkit errors."""
    pass


class ConfigurationError(SimulationToolkitError):
    """Exception raised for errors in settings or run configuration documents."""
    pass


class InvalidArgumentError(SimulationToolkitError, ValueError):
    """Exception raised when an operation receives arguments outside its domain."""
    pass


class SingularSystemError(SimulationToolkitError):
    """Exception raised when an interpolation system cannot be solved."""
    pass


class UnsupportedOrderError(SimulationToolkitError):
    """Exception raised when a derivative order is not supported."""

    def __init__(self, order: int, supported: str = "1..4"):
        self.order = order
        super().__init__(f"Derivative order {order} not supported (use {supported})")


class DegenerateParametrizationError(SimulationToolkitError):
    """Exception raised when the parametric speed ||X_lambda|| collapses."""
    pass


class EvaluationAtSingularityError(SimulationToolkitError):
    """Exception raised when a singular Stokeslet is evaluated on a force location."""
    pass


class SimulationDivergedError(SimulationToolkitError):
    """Exception raised when a time step produces non-finite values."""

    def __init__(self, message: str, step: Optional[int] = None, time: Optional[float] = None):
        """
        Initialize SimulationDivergedError with the step context.

        Args:
            message: Error message
            step: Index of the step that failed
            time: Simulation time at the start of the failed step
        """
        self.step = step
        self.time = time
        super().__init__(f"{message} (step={step}, t={time})")


class ExperimentError(SimulationToolkitError):
    """Exception raised when a registered experiment fails."""

    def __init__(self, message: str, experiment_name: str):
        """
        Initialize ExperimentError with additional context.

        Args:
            message: Error message
            experiment_name: Name of the experiment that encountered the error
        """
        self.experiment_name = experiment_name
        super().__init__(f"{experiment_name} error: {message}")


class BatchError(ExperimentError):
    """Exception raised when some jobs of a concurrent batch fail."""

    def __init__(self, results: List[Optional[Any]], failures: Dict[str, Exception]):
        """
        Initialize BatchError with the outcome of every job.

        Args:
            results: Per-job results in job order, None where the job failed
            failures: Job label to the exception it raised
        """
        self.results = results
        self.failures = failures
        details = "; ".join(f"[{label}] {error}" for label, error in failures.items())
        super().__init__(f"{len(failures)} of {len(results)} jobs failed: {details}", "batch")


class ReportError(SimulationToolkitError):
    """Exception raised when a report cannot be rendered or written."""
    pass


class IllConditionedWarning(UserWarning):
    """Warning issued when an interpolation matrix exceeds the condition threshold."""
    pass
