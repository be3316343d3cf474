"""
Force models acting on the immersed curve.
"""
from .models import (
    CurvatureRestoringForce,
    ForceModel,
    ForceModelConfig,
    ForceVariant,
    PrescribedTangentialForce,
    TargetShape,
    TensionBendingForce,
    bending,
    curvature_restoring,
    make_force_model,
    prescribed_tangential,
    tension,
    total_force,
)

__all__ = [
    'CurvatureRestoringForce', 'ForceModel', 'ForceModelConfig', 'ForceVariant',
    'PrescribedTangentialForce', 'TargetShape', 'TensionBendingForce',
    'bending', 'curvature_restoring', 'make_force_model', 'prescribed_tangential',
    'tension', 'total_force',
]
