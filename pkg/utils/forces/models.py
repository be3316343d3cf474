"""
Line-force density models evaluated at the sample sites of a curve.

Densities F are the forces exerted by the structure; the Stokeslet assembly
turns them into point forces on the fluid.
"""
from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..geometry.curve import (
    GeometryBundle,
    ParametricCurve,
    arclength,
    coordinate_derivative,
    geometry,
    operator_bank,
)
from ..geometry.interpolation import KernelSpec, OperatorBank, apply
from ..geometry.nodes import NodeSet


class ForceVariant(str, Enum):
    PRESCRIBED_TANGENTIAL = "prescribed_tangential"
    CURVATURE_RESTORING = "curvature_restoring"
    TENSION_BENDING = "tension_bending"


class TargetShape(BaseModel):
    """Preferred shape (lambda, b sin(k lambda - omega t)) of the bending force."""

    model_config = ConfigDict(frozen=True)

    b: float = 0.01
    k: float = 2.0 * np.pi
    omega: float = 0.0

    def fourth_derivative(self, lam: np.ndarray, t: float) -> np.ndarray:
        out = np.zeros((np.size(lam), 2))
        out[:, 1] = self.b * self.k ** 4 * np.sin(self.k * np.asarray(lam) - self.omega * t)
        return out


class ForceModelConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    variant: ForceVariant = ForceVariant.CURVATURE_RESTORING
    strength: float = 0.1
    target_arclength: float = 1.5 * np.pi
    S_T: float = Field(default=0.0, ge=0.0)
    S_B: float = Field(default=0.0, ge=0.0)
    target_shape: TargetShape = TargetShape()
    tangential_amplitude: float = 2.0
    tangential_mode: int = 3


def prescribed_tangential(geom: GeometryBundle | np.ndarray, sample: NodeSet,
                          amplitude: float = 2.0, mode: int = 3) -> np.ndarray:
    """
    F(lambda) = -amplitude sin(mode lambda) X_lambda, tangential by construction.

    ``geom`` may also be the (N_s, 2) array of X_lambda itself, for tangents
    that come from outside the interpolation operators.
    """
    first = geom.first_derivatives if isinstance(geom, GeometryBundle) else np.asarray(geom, dtype=float)
    scale = -amplitude * np.sin(mode * sample.values)
    return scale[:, np.newaxis] * first


def curvature_restoring(geom: GeometryBundle, L: float, config: ForceModelConfig) -> np.ndarray:
    """
    F = -strength kappa n_in (L - L_target), with n_in the inward normal.

    The bundle carries outward normals, so this is +strength kappa n (L - L_target):
    a curve longer than the target is pushed inward at its convex parts. On the
    unit circle (L = 2 pi, L_target = 3 pi/2, strength 0.1) the density is
    +(pi/20) n with n outward, not -(pi/20) n. The fluid receives -F dlambda, so
    this sign shrinks a too-long circle; the other sign would grow it.
    """
    factor = config.strength * (L - config.target_arclength)
    return factor * geom.signed_curvature[:, np.newaxis] * geom.unit_normals


def tension(curve: ParametricCurve, spec: Optional[KernelSpec], sample: NodeSet,
            config: ForceModelConfig, operators: Optional[OperatorBank] = None) -> np.ndarray:
    """
    F^T = d/dlambda [S_T (||X_lambda|| - 1) X_lambda/||X_lambda||].

    The bracket is formed at the data nodes and differentiated onto the
    sample nodes with the first-derivative operator.
    """
    if config.S_T == 0.0:
        return np.zeros((sample.count, 2))
    bank = operator_bank(curve, spec, operators)
    at_data = geometry(curve, spec, curve.data_nodes, operators=bank)
    q = config.S_T * (at_data.speed - 1.0)[:, np.newaxis] * at_data.unit_tangents
    return apply(bank.get(sample, 1), q)


def bending(curve: ParametricCurve, spec: Optional[KernelSpec], sample: NodeSet, t: float,
            config: ForceModelConfig, operators: Optional[OperatorBank] = None) -> np.ndarray:
    """F^B = S_B (X_llll - X^I_llll), the target's fourth derivative taken analytically."""
    if config.S_B == 0.0:
        return np.zeros((sample.count, 2))
    bank = operator_bank(curve, spec, operators)
    fourth = coordinate_derivative(curve, bank, sample, 4)
    return config.S_B * (fourth - config.target_shape.fourth_derivative(sample.values, t))


class ForceModel(ABC):
    """Base class for force models driven by a ForceModelConfig."""

    def __init__(self, config: ForceModelConfig):
        self.config = config

    @abstractmethod
    def densities(self, curve: ParametricCurve, spec: Optional[KernelSpec], sample: NodeSet,
                  t: float, operators: Optional[OperatorBank] = None) -> np.ndarray:
        """Line-force densities at the sample nodes, shape (N_s, 2)"""
        pass


class PrescribedTangentialForce(ForceModel):
    def densities(self, curve, spec, sample, t, operators=None):
        geom = geometry(curve, spec, sample, operators=operators)
        return prescribed_tangential(
            geom, sample, self.config.tangential_amplitude, self.config.tangential_mode
        )


class CurvatureRestoringForce(ForceModel):
    def densities(self, curve, spec, sample, t, operators=None):
        bank = operator_bank(curve, spec, operators)
        geom = geometry(curve, spec, sample, operators=bank)
        L = arclength(curve, spec, sample, operators=bank)
        return curvature_restoring(geom, L, self.config)


class TensionBendingForce(ForceModel):
    def densities(self, curve, spec, sample, t, operators=None):
        bank = operator_bank(curve, spec, operators)
        return (
            tension(curve, spec, sample, self.config, operators=bank)
            + bending(curve, spec, sample, t, self.config, operators=bank)
        )


_MODELS = {
    ForceVariant.PRESCRIBED_TANGENTIAL: PrescribedTangentialForce,
    ForceVariant.CURVATURE_RESTORING: CurvatureRestoringForce,
    ForceVariant.TENSION_BENDING: TensionBendingForce,
}


def make_force_model(config: ForceModelConfig) -> ForceModel:
    return _MODELS[ForceVariant(config.variant)](config)


def total_force(curve: ParametricCurve, spec: Optional[KernelSpec], sample: NodeSet, t: float,
                config: ForceModelConfig, operators: Optional[OperatorBank] = None) -> np.ndarray:
    """
    Densities of the configured variant at the sample nodes.

    Args:
        curve: Current curve state
        spec: Kernel used when no operator bank is given
        sample: Sample nodes
        t: Simulation time (only the bending target depends on it)
        config: Force model configuration
        operators: Optional operator bank on the curve's data nodes

    Returns:
        Array of shape (N_s, 2)
    """
    return make_force_model(config).densities(curve, spec, sample, t, operators)
