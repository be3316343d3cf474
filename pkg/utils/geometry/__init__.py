"""
Parametric geometry: node families, kernel and Lagrange interpolation operators, curves.
"""
from .nodes import NodeKind, NodeSet, chebyshev, equispaced, equispaced_periodic, kte, make_nodes
from .interpolation import (
    Construction,
    DistanceMetric,
    InterpolationMethod,
    KernelFamily,
    KernelSpec,
    LinearOperator,
    OperatorBank,
    apply,
    build_interp_matrix,
    build_operator,
    distance,
    kernel_lambda_derivative,
    kernel_value,
)
from .barycentric import (
    BarycentricInterpolant,
    barycentric_build,
    barycentric_derivative_two_stage,
    barycentric_eval,
    barycentric_operator,
)
from .curve import (
    EvaluationSite,
    GeometryBundle,
    ParametricCurve,
    Topology,
    arclength,
    enclosed_area,
    geometry,
    sample_positions,
)

__all__ = [
    'NodeKind', 'NodeSet', 'chebyshev', 'equispaced', 'equispaced_periodic', 'kte', 'make_nodes',
    'Construction', 'DistanceMetric', 'InterpolationMethod', 'KernelFamily', 'KernelSpec',
    'LinearOperator', 'OperatorBank', 'apply', 'build_interp_matrix', 'build_operator',
    'distance', 'kernel_lambda_derivative', 'kernel_value',
    'BarycentricInterpolant', 'barycentric_build', 'barycentric_derivative_two_stage',
    'barycentric_eval', 'barycentric_operator',
    'EvaluationSite', 'GeometryBundle', 'ParametricCurve', 'Topology',
    'arclength', 'enclosed_area', 'geometry', 'sample_positions',
]
