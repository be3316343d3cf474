"""
RBF-Stokeslets Application Utilities

This package contains the numerical toolkit and its front-end helpers,
organized into subpackages:

- core: Configuration, exceptions, status reporting and session state
- geometry: Node sets, kernel and barycentric operators, parametric curves
- fluid: Regularized and singular Stokeslet fields
- forces: Force-density models on curves
- simulation: Forward Euler time stepping
- experiments: Error studies and reproduction runs behind a registry
- orchestration: Concurrent execution of experiments
- services: CSV/JSON export and Markdown reports
- ui: Streamlit components
"""

# Import key components for easier access
from .core.config import get_app_setting
from .core.exceptions import ConfigurationError, SimulationToolkitError
from .experiments.registry import registry
from .orchestration.orchestrator import ExperimentOrchestrator
