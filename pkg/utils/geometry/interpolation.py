"""
Kernel interpolation on parametric nodes.

SBF and RBF interpolants share one code path: a kernel matrix A built on the
data nodes, a kernel (or kernel-derivative) matrix B built between target and
data nodes, and the coefficient-free operator B A^{-1}. Operators are formed
from an LU factorization of A; the inverse is never formed explicitly.
"""
import logging
import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import linalg

from ..core.config import get_app_setting
from ..core.exceptions import (
    IllConditionedWarning,
    InvalidArgumentError,
    SingularSystemError,
    UnsupportedOrderError,
)
from .nodes import NodeSet

logger = logging.getLogger(__name__)

MAX_DERIVATIVE_ORDER = 4

# f^(m)(s) = c_m eps^(2m) (1 + eps^2 s)^(1/2 - m) for the multiquadric written in s = r^2
_MQ_SERIES = (1.0, 0.5, -0.25, 0.375, -0.9375)


class KernelFamily(str, Enum):
    MULTIQUADRIC = "multiquadric"
    LINEAR_SPLINE = "linear_spline"


class DistanceMetric(str, Enum):
    SBF_CHORDAL = "sbf_chordal"
    RBF_ABSOLUTE = "rbf_absolute"


class Construction(str, Enum):
    RBF_FAMILY = "rbf_family"
    LAGRANGE_CHEBYSHEV_TWO_STAGE = "lagrange_chebyshev_two_stage"


class KernelSpec(BaseModel):
    """Kernel family, shape parameter and distance metric of an interpolant."""

    model_config = ConfigDict(frozen=True)

    family: KernelFamily = KernelFamily.MULTIQUADRIC
    epsilon: float = Field(default=1.0, gt=0.0)
    metric: DistanceMetric = DistanceMetric.SBF_CHORDAL

    @property
    def key(self) -> tuple:
        return (self.family.value, float(self.epsilon), self.metric.value)


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """A dense N_out x N_d evaluation (n = 0) or differentiation matrix."""

    source_nodes: NodeSet
    target_nodes: NodeSet
    derivative_order: int
    matrix: np.ndarray
    construction: Construction = Construction.RBF_FAMILY
    condition_estimate: Optional[float] = None
    warnings: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape


def distance(spec: KernelSpec, lam, lam_k):
    """
    Distance between parameter values under the spec's metric.

    The chordal form sqrt(2 - 2cos d) is evaluated as 2|sin(d/2)|, which is
    the same quantity without cancellation near d = 0.
    """
    d = np.subtract(lam, lam_k, dtype=float)
    if spec.metric is DistanceMetric.SBF_CHORDAL:
        return 2.0 * np.abs(np.sin(0.5 * d))
    return np.abs(d)


def kernel_value(spec: KernelSpec, r):
    """
    Evaluate the radial kernel.

    Args:
        spec: Kernel specification
        r: Nonnegative distance (scalar or array)

    Returns:
        phi(r) with the same shape as r
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise InvalidArgumentError("Kernel distance must be nonnegative")
    if spec.family is KernelFamily.LINEAR_SPLINE:
        out = r.copy()
    else:
        out = np.sqrt(1.0 + (spec.epsilon * r) ** 2)
    return out if out.ndim else float(out)


def _metric_series(spec: KernelSpec, d: np.ndarray):
    """s = r^2 and its first four derivatives with respect to d = lambda - lambda_k."""
    if spec.metric is DistanceMetric.SBF_CHORDAL:
        c, s = np.cos(d), np.sin(d)
        return (2.0 - 2.0 * c, 2.0 * s, 2.0 * c, -2.0 * s, -2.0 * c)
    zero = np.zeros_like(d)
    return (d * d, 2.0 * d, np.full_like(d, 2.0), zero, zero)


def _multiquadric_derivative(spec: KernelSpec, n: int, d: np.ndarray) -> np.ndarray:
    s, s1, s2, s3, s4 = _metric_series(spec, d)
    eps2 = spec.epsilon ** 2
    base = 1.0 + eps2 * s
    f = [_MQ_SERIES[m] * eps2 ** m * base ** (0.5 - m) for m in range(n + 1)]
    if n == 0:
        return f[0]
    if n == 1:
        return f[1] * s1
    if n == 2:
        return f[2] * s1 ** 2 + f[1] * s2
    if n == 3:
        return f[3] * s1 ** 3 + 3.0 * f[2] * s1 * s2 + f[1] * s3
    return (
        f[4] * s1 ** 4
        + 6.0 * f[3] * s1 ** 2 * s2
        + f[2] * (3.0 * s2 ** 2 + 4.0 * s1 * s3)
        + f[1] * s4
    )


def _linear_spline_derivative(spec: KernelSpec, n: int, d: np.ndarray) -> np.ndarray:
    if spec.metric is DistanceMetric.RBF_ABSOLUTE:
        if n == 0:
            return np.abs(d)
        return np.sign(d) if n == 1 else np.zeros_like(d)
    # 2|sin(d/2)| away from d = 0; the n-th derivative of sin(d/2) is 2^-n sin(d/2 + n pi/2)
    half = 0.5 * d
    return 2.0 * np.sign(np.sin(half)) * 0.5 ** n * np.sin(half + 0.5 * n * np.pi)


def _kernel_derivative(spec: KernelSpec, n: int, lam, lam_k) -> np.ndarray:
    d = np.subtract(lam, lam_k, dtype=float)
    if spec.family is KernelFamily.LINEAR_SPLINE:
        return _linear_spline_derivative(spec, n, d)
    return _multiquadric_derivative(spec, n, d)


def kernel_lambda_derivative(spec: KernelSpec, n: int, lam, lam_k):
    """
    Exact n-th derivative of phi(r(lambda)) with respect to lambda.

    The multiquadric is a smooth function of r^2, so the derivatives are
    built by the chain rule on s = r^2 and stay smooth through lambda = lambda_k.

    Args:
        spec: Kernel specification
        n: Derivative order, 1..4
        lam: Evaluation parameter(s)
        lam_k: Center parameter(s)

    Returns:
        The derivative, broadcast over lam and lam_k
    """
    if int(n) != n or not 1 <= n <= MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrderError(n)
    out = _kernel_derivative(spec, int(n), lam, lam_k)
    return out if np.ndim(out) else float(out)


def _check_distinct(spec: KernelSpec, nodes: NodeSet) -> None:
    values = nodes.values
    if values.size < 2:
        return
    if np.any(np.diff(np.sort(values)) <= 0.0):
        raise SingularSystemError("Interpolation nodes must be pairwise distinct")
    if spec.metric is DistanceMetric.SBF_CHORDAL:
        wrapped = np.sort(np.mod(values, 2.0 * np.pi))
        gaps = np.diff(np.concatenate([wrapped, wrapped[:1] + 2.0 * np.pi]))
        if np.min(gaps) <= 1e-12:
            raise SingularSystemError(
                "SBF nodes must be distinct modulo 2*pi (span below one period)"
            )


def kernel_matrix(spec: KernelSpec, target: np.ndarray, source: np.ndarray, n: int = 0) -> np.ndarray:
    """B^n_{jk}: n-th lambda-derivative of the kernel at target j, center k."""
    t = np.asarray(target, dtype=float)[:, np.newaxis]
    s = np.asarray(source, dtype=float)[np.newaxis, :]
    return np.asarray(_kernel_derivative(spec, n, t, s), dtype=float)


def build_interp_matrix(spec: KernelSpec, nodes: NodeSet) -> np.ndarray:
    """
    Build the symmetric kernel matrix A_{jk} = phi(r_{j,k}).

    Raises:
        SingularSystemError: If nodes repeat (modulo 2*pi for the SBF metric)
    """
    _check_distinct(spec, nodes)
    A = kernel_matrix(spec, nodes.values, nodes.values, 0)
    upper = np.triu(A)
    return upper + np.triu(A, 1).T


def _factor(A: np.ndarray):
    # Singularity is read off the U diagonal.
    try:
        lu, piv = linalg.lu_factor(A, check_finite=True)
    except (linalg.LinAlgError, ValueError) as e:
        raise SingularSystemError(f"Kernel matrix factorization failed: {str(e)}") from e
    if not np.all(np.isfinite(lu)) or np.any(np.diag(lu) == 0.0):
        raise SingularSystemError("Kernel matrix is exactly singular")
    return lu, piv


def _condition_check(A: np.ndarray, warn: bool = True) -> Tuple[float, Tuple[str, ...]]:
    threshold = float(get_app_setting("interpolation.condition_threshold"))
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > threshold:
        message = f"Kernel matrix condition estimate {cond:.3e} exceeds {threshold:.1e}"
        if warn:
            warnings.warn(message, IllConditionedWarning, stacklevel=3)
            logger.warning(message)
        else:
            logger.debug(message)
        return cond, (message,)
    return cond, ()


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix = np.ascontiguousarray(matrix, dtype=float)
    matrix.setflags(write=False)
    return matrix


def _coincident_rows(source: np.ndarray, target: np.ndarray):
    """Pairs (row, column) where a target node equals a source node exactly."""
    hits = np.nonzero(target[:, np.newaxis] == source[np.newaxis, :])
    return hits[0], hits[1]


def build_operator(spec: KernelSpec, source: NodeSet, target: NodeSet, n: int = 0,
                   warn: bool = True) -> LinearOperator:
    """
    Build the operator B^n A^{-1} mapping data-node samples to target values.

    Since A is symmetric, the operator is obtained from one factorization as
    (A^{-1} (B^n)^T)^T. For n = 0, target nodes that coincide with a source
    node get the exact unit row.

    Args:
        spec: Kernel specification
        source: Data nodes
        target: Target nodes
        n: Derivative order, 0..4
        warn: Emit IllConditionedWarning above the condition threshold; the
            note is attached to the operator either way

    Returns:
        LinearOperator with the condition estimate and any warnings attached
    """
    if int(n) != n or not 0 <= n <= MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrderError(n, supported="0..4")
    A = build_interp_matrix(spec, source)
    lu_piv = _factor(A)
    cond, notes = _condition_check(A, warn)

    B = kernel_matrix(spec, target.values, source.values, int(n))
    matrix = linalg.lu_solve(lu_piv, B.T).T
    if n == 0:
        rows, cols = _coincident_rows(source.values, target.values)
        matrix[rows, :] = 0.0
        matrix[rows, cols] = 1.0
    if not np.all(np.isfinite(matrix)):
        raise SingularSystemError("Operator contains non-finite entries")

    logger.debug(
        "Built %s operator n=%d (%d x %d), cond=%.3e",
        spec.metric.value, n, target.count, source.count, cond,
    )
    return LinearOperator(
        source_nodes=source,
        target_nodes=target,
        derivative_order=int(n),
        matrix=_frozen(matrix),
        construction=Construction.RBF_FAMILY,
        condition_estimate=cond,
        warnings=notes,
    )


def solve_coefficients(spec: KernelSpec, nodes: NodeSet, data) -> np.ndarray:
    """Expansion coefficients c = A^{-1} y (the explicit-coefficient path)."""
    data = np.asarray(data, dtype=float)
    if data.shape[0] != nodes.count:
        raise InvalidArgumentError(
            f"Data length {data.shape[0]} does not match {nodes.count} nodes"
        )
    return linalg.lu_solve(_factor(build_interp_matrix(spec, nodes)), data)


def evaluate_expansion(spec: KernelSpec, nodes: NodeSet, coefficients, target, n: int = 0) -> np.ndarray:
    """Evaluate sum_k c_k d^n/dlambda^n phi(r(lambda, lambda_k)) at target parameters."""
    target = np.atleast_1d(np.asarray(target, dtype=float))
    return kernel_matrix(spec, target, nodes.values, n) @ np.asarray(coefficients, dtype=float)


def apply(op: LinearOperator, data) -> np.ndarray:
    """
    Apply an operator to data samples at its source nodes.

    Args:
        op: Operator of shape (N_out, N_d)
        data: Array of shape (N_d,) or (N_d, m)

    Returns:
        Array of shape (N_out,) or (N_out, m)
    """
    data = np.asarray(data, dtype=float)
    if data.ndim == 0 or data.shape[0] != op.matrix.shape[1]:
        raise InvalidArgumentError(
            f"Operator expects {op.matrix.shape[1]} samples, got shape {data.shape}"
        )
    return op.matrix @ data


class InterpolationMethod(str, Enum):
    SBF = "sbf"
    RBF = "rbf"
    LAGRANGE_CHEBYSHEV = "lagrange_chebyshev"


class OperatorBank:
    """
    Memoized operators for one kernel and one data-node set.

    Parametric nodes do not move, so E and D^n are built once per target node
    set and reused for every time step and coordinate.
    """

    def __init__(self, source: NodeSet, spec: Optional[KernelSpec] = None,
                 method: InterpolationMethod | str = InterpolationMethod.SBF, warn: bool = True):
        self.source = source
        self.spec = spec
        self.warn = warn
        self.method = InterpolationMethod(method)
        if self.method is not InterpolationMethod.LAGRANGE_CHEBYSHEV and spec is None:
            raise InvalidArgumentError("Kernel operators require a KernelSpec")
        self._cache: Dict[tuple, LinearOperator] = {}

    def _builder(self) -> Callable[[NodeSet, int], LinearOperator]:
        if self.method is InterpolationMethod.LAGRANGE_CHEBYSHEV:
            from .barycentric import barycentric_operator

            return lambda target, n: barycentric_operator(self.source, target, n)
        return lambda target, n: build_operator(self.spec, self.source, target, n, warn=self.warn)

    def get(self, target: NodeSet, n: int = 0) -> LinearOperator:
        """Return the cached operator for (target, n), building it on first use."""
        key = (target.key, int(n))
        if key not in self._cache:
            self._cache[key] = self._builder()(target, int(n))
        return self._cache[key]

    def __len__(self) -> int:
        return len(self._cache)
