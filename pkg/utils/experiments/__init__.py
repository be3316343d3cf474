"""
Error studies, Stokeslet comparisons and simulation runs packaged as experiments.
"""
from .base import Experiment, ExperimentResult
from .registry import ExperimentRegistry, registry
from .shapes import TestShapeConfig, perturbed_shape
from .static import ErrorReport, EpsilonSweep, StudyMethod, epsilon_sweep, static_error_study
from .tangential import (
    TangentialReport,
    TangentSource,
    closed_tangential_test,
    fd_tangent_baseline,
    open_tangential_test,
)

__all__ = [
    'Experiment', 'ExperimentResult', 'ExperimentRegistry', 'registry',
    'TestShapeConfig', 'perturbed_shape',
    'ErrorReport', 'EpsilonSweep', 'StudyMethod', 'epsilon_sweep', 'static_error_study',
    'TangentialReport', 'TangentSource', 'closed_tangential_test', 'fd_tangent_baseline',
    'open_tangential_test',
]
