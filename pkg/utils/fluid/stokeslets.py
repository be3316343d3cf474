"""
Regularized and singular 2D Stokeslets.

For point forces F_k at X_k and d = x - X_k, r = |d|, the fields are

    p(x)    = sum_k (F_k . d) G'(r)/r
    mu u(x) = sum_k H1(r) F_k + H2(r) (F_k . d) d

with H1 = 1/(8 pi) + B'/r - G and H2 = (B'' - B'/r)/r^2. Every radial
function below is written without a division by r, so all of them are finite
and exact at r = 0 for delta > 0.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..core.config import get_app_setting
from ..core.exceptions import EvaluationAtSingularityError, InvalidArgumentError

logger = logging.getLogger(__name__)

FOUR_PI = 4.0 * np.pi
EIGHT_PI = 8.0 * np.pi


class BlobModel(BaseModel):
    """Regularization length and viscosity. delta = 0 selects the singular kernels."""

    model_config = ConfigDict(frozen=True)

    delta: float = Field(ge=0.0)
    mu: float = Field(default=1.0, gt=0.0)


@dataclass(frozen=True, eq=False)
class ForceSample:
    positions: np.ndarray
    densities: np.ndarray
    dlambda: float

    def __post_init__(self):
        positions = np.asarray(self.positions, dtype=float)
        densities = np.asarray(self.densities, dtype=float)
        if positions.ndim != 2 or positions.shape[1] != 2 or densities.shape != positions.shape:
            raise InvalidArgumentError(
                f"Force positions {positions.shape} and densities {densities.shape} must both be (N, 2)"
            )
        if not np.all(np.isfinite(positions)):
            raise InvalidArgumentError("Force positions must be finite")
        if not self.dlambda > 0:
            raise InvalidArgumentError(f"Quadrature weight must be positive, got {self.dlambda}")
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "densities", densities)

    @property
    def point_forces(self) -> np.ndarray:
        return assemble_point_forces(self.densities, self.dlambda)


@dataclass(frozen=True, eq=False)
class FieldSample:
    points: np.ndarray
    pressure: np.ndarray
    velocity: np.ndarray


def _radius(r, delta):
    r = np.asarray(r, dtype=float)
    return r, np.sqrt(r * r + delta * delta)


def _scalar(out):
    return float(out) if np.ndim(out) == 0 else out


def g_delta(r, delta: float):
    """G_delta(r) = (1/2pi) [ln(R + delta) - delta/R], R = sqrt(r^2 + delta^2)."""
    _, R = _radius(r, delta)
    return _scalar((np.log(R + delta) - delta / R) / (2.0 * np.pi))


def g_delta_prime_over_r(r, delta: float):
    """G'_delta(r)/r = (R^2 + R delta + delta^2) / (2 pi R^3 (R + delta)); 3/(4 pi delta^2) at r = 0."""
    _, R = _radius(r, delta)
    return _scalar((R * R + R * delta + delta * delta) / (2.0 * np.pi * R ** 3 * (R + delta)))


def g_delta_prime(r, delta: float):
    r, _ = _radius(r, delta)
    return _scalar(r * g_delta_prime_over_r(r, delta))


def blob(r, delta: float):
    """phi_delta(r) = 3 delta^3 / (2 pi R^5)."""
    _, R = _radius(r, delta)
    return _scalar(3.0 * delta ** 3 / (2.0 * np.pi * R ** 5))


def bprime_delta_over_r(r, delta: float):
    """B'_delta(r)/r = (1/8pi) [2 ln(R + delta) - 1 - 2 delta/(R + delta)]."""
    _, R = _radius(r, delta)
    return _scalar((2.0 * np.log(R + delta) - 1.0 - 2.0 * delta / (R + delta)) / EIGHT_PI)


def bprime_delta(r, delta: float):
    """B'_delta(r) = (1/8pi) [2r ln(R + delta) - r - 2 r delta/(R + delta)]."""
    r, _ = _radius(r, delta)
    return _scalar(r * bprime_delta_over_r(r, delta))


def _b_curvature_term(r, delta: float):
    """(B'' - B'/r)/r^2 = (R + 2 delta) / (4 pi R (R + delta)^2)."""
    _, R = _radius(r, delta)
    return (R + 2.0 * delta) / (FOUR_PI * R * (R + delta) ** 2)


def bdoubleprime_delta(r, delta: float):
    r, _ = _radius(r, delta)
    return _scalar(bprime_delta_over_r(r, delta) + r * r * _b_curvature_term(r, delta))


def assemble_point_forces(densities, dlambda: float) -> np.ndarray:
    """Point forces F_k = -F_k dlambda from line-force densities."""
    if not dlambda > 0:
        raise InvalidArgumentError(f"Quadrature weight must be positive, got {dlambda}")
    return -np.asarray(densities, dtype=float) * dlambda


def _regularized_kernels(r2: np.ndarray, delta: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    R = np.sqrt(r2 + delta * delta)
    Rd = R + delta
    h1 = -np.log(Rd) / FOUR_PI + delta * (R + 2.0 * delta) / (FOUR_PI * R * Rd)
    h2 = (R + 2.0 * delta) / (FOUR_PI * R * Rd * Rd)
    pk = (R * R + R * delta + delta * delta) / (2.0 * np.pi * R ** 3 * Rd)
    return h1, h2, pk


def _singular_kernels(r2: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return -np.log(r2) / EIGHT_PI, 1.0 / (FOUR_PI * r2), 1.0 / (2.0 * np.pi * r2)


def _row_sum(terms: np.ndarray, compensated: bool) -> np.ndarray:
    if compensated:
        return np.array([math.fsum(row) for row in terms])
    return np.sum(terms, axis=1)


def _as_points(points) -> np.ndarray:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != 2:
        raise InvalidArgumentError(f"Evaluation points must be (M, 2), got {points.shape}")
    return points


def _superpose(forces: ForceSample, mu: float, points: np.ndarray, delta: Optional[float]) -> FieldSample:
    chunk = max(1, int(get_app_setting("stokeslets.chunk_size")))
    compensated = bool(get_app_setting("stokeslets.compensated_summation"))
    X = forces.positions
    F = forces.point_forces

    pressure = np.zeros(points.shape[0])
    velocity = np.zeros_like(points)
    for start in range(0, points.shape[0], chunk):
        block = points[start:start + chunk]
        dx = block[:, 0, np.newaxis] - X[np.newaxis, :, 0]
        dy = block[:, 1, np.newaxis] - X[np.newaxis, :, 1]
        r2 = dx * dx + dy * dy
        if delta is None:
            h1, h2, pk = _singular_kernels(r2)
        else:
            h1, h2, pk = _regularized_kernels(r2, delta)
        f_dot_d = dx * F[:, 0] + dy * F[:, 1]
        stop = start + block.shape[0]
        pressure[start:stop] = _row_sum(f_dot_d * pk, compensated)
        velocity[start:stop, 0] = _row_sum(h1 * F[:, 0] + h2 * f_dot_d * dx, compensated) / mu
        velocity[start:stop, 1] = _row_sum(h1 * F[:, 1] + h2 * f_dot_d * dy, compensated) / mu
    return FieldSample(points=points, pressure=pressure, velocity=velocity)


def evaluate_field(forces: ForceSample, blob: BlobModel, points) -> FieldSample:
    """
    Regularized Stokeslet pressure and velocity at the evaluation points.

    Args:
        forces: Sample-site positions, line-force densities and quadrature weight
        blob: Regularization length (must be positive) and viscosity
        points: Evaluation points, shape (M, 2)

    Returns:
        FieldSample with pressure (M,) and velocity (M, 2)
    """
    if not blob.delta > 0:
        raise InvalidArgumentError("Regularized field needs delta > 0; use singular_field for delta = 0")
    return _superpose(forces, blob.mu, _as_points(points), blob.delta)


def singular_field(forces: ForceSample, mu: float, points) -> FieldSample:
    """
    The delta -> 0 limit of evaluate_field (classical 2D Stokeslet).

    Raises:
        EvaluationAtSingularityError: If an evaluation point sits on a force location
    """
    if not mu > 0:
        raise InvalidArgumentError(f"Viscosity must be positive, got {mu}")
    points = _as_points(points)
    gaps = points[:, np.newaxis, :] - forces.positions[np.newaxis, :, :]
    if np.any(np.einsum("mki,mki->mk", gaps, gaps) == 0.0):
        raise EvaluationAtSingularityError("Singular Stokeslet evaluated on a force location")
    return _superpose(forces, mu, points, None)


def parse_grid(grid: str | Sequence[float]) -> np.ndarray:
    """
    Points of a rectangular grid given as ``x0,x1,nx,y0,y1,ny``.

    Returns:
        Array of shape (nx * ny, 2), x varying fastest
    """
    try:
        parts = grid.split(",") if isinstance(grid, str) else list(grid)
        x0, x1, nx, y0, y1, ny = (float(p) for p in parts)
    except (TypeError, ValueError) as e:
        raise InvalidArgumentError(f"Grid must be 'x0,x1,nx,y0,y1,ny', got {grid!r}") from e
    if nx < 1 or ny < 1 or int(nx) != nx or int(ny) != ny:
        raise InvalidArgumentError("Grid counts must be positive integers")
    xs = np.linspace(x0, x1, int(nx))
    ys = np.linspace(y0, y1, int(ny))
    gx, gy = np.meshgrid(xs, ys)
    return np.column_stack([gx.ravel(), gy.ravel()])


def evaluate_grid(forces: ForceSample, blob: BlobModel, grid: str | Sequence[float]) -> FieldSample:
    """Field snapshot on a rectangular grid (singular kernels when delta = 0)."""
    points = parse_grid(grid)
    logger.debug("Evaluating field on %d grid points", points.shape[0])
    if blob.delta > 0:
        return evaluate_field(forces, blob, points)
    return singular_field(forces, blob.mu, points)
