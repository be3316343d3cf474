"""
Analytic test shapes and reference quantities for the static error studies.

The perturbed sinusoid is a graph y = Y_P(lambda) on [0, 1]:

    Y_P = [1 + A exp(-|sin 2 pi lambda|^3 / sigma)] b sin(2 pi lambda - omega)

(1 - cos^2)^1.5 is |sin|^3, which has exactly two continuous derivatives.
"""
from typing import Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

TWO_PI = 2.0 * np.pi


class TestShapeConfig(BaseModel):
    __test__ = False

    model_config = ConfigDict(frozen=True)

    b: float = 0.05
    A_pert: float = 0.04
    sigma: float = Field(default=0.9, gt=0.0)
    omega_phase: float = 0.0


def perturbed_shape(lam, config: TestShapeConfig = TestShapeConfig()):
    """
    Point (x, y) = (lambda, Y_P(lambda)) of the perturbed sinusoid.

    Args:
        lam: Parameter value(s) in [0, 1]
        config: Shape parameters

    Returns:
        Tuple (x, y) with the shape of ``lam``
    """
    y, _, _ = perturbed_derivatives(lam, config)
    x = np.asarray(lam, dtype=float)
    if x.ndim == 0:
        return float(x), float(y)
    return x, y


def perturbed_derivatives(lam, config: TestShapeConfig = TestShapeConfig()) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Y_P and its first two lambda-derivatives in closed form."""
    lam = np.asarray(lam, dtype=float)
    s = np.sin(TWO_PI * lam)
    c = np.cos(TWO_PI * lam)
    abs_s = np.abs(s)

    h = abs_s ** 3
    h1 = 6.0 * np.pi * c * s * abs_s
    h2 = 12.0 * np.pi ** 2 * abs_s * (2.0 * c * c - s * s)

    e = np.exp(-h / config.sigma)
    g = 1.0 + config.A_pert * e
    g1 = -config.A_pert * (h1 / config.sigma) * e
    g2 = config.A_pert * (h1 ** 2 / config.sigma ** 2 - h2 / config.sigma) * e

    phase = TWO_PI * lam - config.omega_phase
    yi = config.b * np.sin(phase)
    yi1 = config.b * TWO_PI * np.cos(phase)
    yi2 = -config.b * TWO_PI ** 2 * np.sin(phase)

    y = g * yi
    y1 = g1 * yi + g * yi1
    y2 = g2 * yi + 2.0 * g1 * yi1 + g * yi2
    return y, y1, y2


def richardson_derivatives(lam, config: TestShapeConfig = TestShapeConfig(),
                           steps: Sequence[float] = (1e-4, 5e-5)) -> Tuple[np.ndarray, np.ndarray]:
    """
    First and second derivatives of Y_P by central differences, Richardson-extrapolated
    over a step h and h/2.
    """
    lam = np.asarray(lam, dtype=float)
    h, h_half = steps

    def central(step):
        yp, _, _ = perturbed_derivatives(lam + step, config)
        ym, _, _ = perturbed_derivatives(lam - step, config)
        y0, _, _ = perturbed_derivatives(lam, config)
        return (yp - ym) / (2.0 * step), (yp - 2.0 * y0 + ym) / step ** 2

    d1_h, d2_h = central(h)
    d1_half, d2_half = central(h_half)
    ratio = (h / h_half) ** 2
    return (
        (ratio * d1_half - d1_h) / (ratio - 1.0),
        (ratio * d2_half - d2_h) / (ratio - 1.0),
    )


def reference_geometry(lam, config: TestShapeConfig = TestShapeConfig()):
    """
    Exact positions, unit normals and second derivatives of the graph, each (N, 2).

    Normals follow the curve convention n = (Y', -X')/|X'| with X' = (1, Y').
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    y, y1, y2 = perturbed_derivatives(lam, config)
    norm = np.sqrt(1.0 + y1 * y1)
    positions = np.column_stack([lam, y])
    normals = np.column_stack([y1 / norm, -1.0 / norm])
    second = np.column_stack([np.zeros_like(lam), y2])
    return positions, normals, second


def max_pointwise_l2(computed, reference) -> float:
    """max_j ||computed_j - reference_j||_2 over rows."""
    diff = np.asarray(computed, dtype=float) - np.asarray(reference, dtype=float)
    if diff.ndim == 1:
        diff = diff[:, np.newaxis]
    return float(np.max(np.linalg.norm(diff, axis=1)))
