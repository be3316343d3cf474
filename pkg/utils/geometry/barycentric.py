"""
Barycentric Lagrange interpolation on Chebyshev-type nodes.

Derivatives use the two-stage strategy: differentiate the interpolant at the
data nodes with the barycentric differentiation matrix, then re-interpolate
those derivative samples at the target nodes.
"""
from dataclasses import dataclass

import numpy as np

from ..core.exceptions import InvalidArgumentError, UnsupportedOrderError
from .interpolation import Construction, LinearOperator, MAX_DERIVATIVE_ORDER
from .nodes import NodeSet


@dataclass(frozen=True, eq=False)
class BarycentricInterpolant:
    nodes: NodeSet
    weights: np.ndarray

    @property
    def count(self) -> int:
        return self.nodes.count


def _offsets(values: np.ndarray) -> np.ndarray:
    diff = values[:, np.newaxis] - values[np.newaxis, :]
    np.fill_diagonal(diff, 1.0)
    return diff


def barycentric_build(nodes: NodeSet) -> BarycentricInterpolant:
    """
    Compute barycentric weights w_k = 1 / prod_{j != k} (lambda_k - lambda_j).

    Differences are scaled by 4/(b - a) before the product and the weights are
    normalized to unit max norm; both are common factors, so evaluation is
    unchanged while overflow is avoided for large N on short intervals.

    Args:
        nodes: Pairwise distinct nodes

    Returns:
        BarycentricInterpolant over the given nodes
    """
    values = nodes.values
    if values.size < 1:
        raise InvalidArgumentError("Barycentric interpolation needs at least one node")
    if np.any(np.diff(np.sort(values)) <= 0.0):
        raise InvalidArgumentError("Barycentric nodes must be pairwise distinct")
    a, b = nodes.interval
    scaled = _offsets(values) * (4.0 / (b - a))
    weights = 1.0 / np.prod(scaled, axis=1)
    weights = weights / np.max(np.abs(weights))
    weights.setflags(write=False)
    return BarycentricInterpolant(nodes=nodes, weights=weights)


def evaluation_matrix(interp: BarycentricInterpolant, points) -> np.ndarray:
    """Rows of the second barycentric form; an exact node hit gives a unit row."""
    points = np.atleast_1d(np.asarray(points, dtype=float))
    diff = points[:, np.newaxis] - interp.nodes.values[np.newaxis, :]
    hit = diff == 0.0
    diff[hit] = 1.0
    q = interp.weights / diff
    exact = np.any(hit, axis=1)
    q[exact] = hit[exact].astype(float)
    return q / np.sum(q, axis=1, keepdims=True)


def differentiation_matrix(interp: BarycentricInterpolant) -> np.ndarray:
    """First-derivative matrix at the nodes, diagonal from the negative-sum trick."""
    values, w = interp.nodes.values, interp.weights
    D = w[np.newaxis, :] / (w[:, np.newaxis] * _offsets(values))
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -np.sum(D, axis=1))
    return D


def barycentric_eval(interp: BarycentricInterpolant, data, lam):
    """
    Evaluate the interpolant of ``data`` at ``lam`` (scalar or array).
    """
    data = np.asarray(data, dtype=float)
    if data.shape[0] != interp.count:
        raise InvalidArgumentError(
            f"Data length {data.shape[0]} does not match {interp.count} nodes"
        )
    out = evaluation_matrix(interp, lam) @ data
    return float(out[0]) if np.ndim(lam) == 0 and data.ndim == 1 else out


def _two_stage_matrix(interp: BarycentricInterpolant, target: NodeSet, n: int) -> np.ndarray:
    matrix = evaluation_matrix(interp, target.values)
    if n == 0:
        return matrix
    D = differentiation_matrix(interp)
    return matrix @ np.linalg.matrix_power(D, n)


def barycentric_derivative_two_stage(interp: BarycentricInterpolant, data, n: int,
                                     target: NodeSet) -> np.ndarray:
    """
    n-th derivative of the Lagrange interpolant evaluated at target nodes.

    Args:
        interp: Interpolant built on the data nodes
        data: Samples at the data nodes
        n: Derivative order, 1..4
        target: Target nodes

    Returns:
        Derivative values at the target nodes
    """
    if int(n) != n or not 1 <= n <= MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrderError(n)
    data = np.asarray(data, dtype=float)
    if data.shape[0] != interp.count:
        raise InvalidArgumentError(
            f"Data length {data.shape[0]} does not match {interp.count} nodes"
        )
    return _two_stage_matrix(interp, target, int(n)) @ data


def barycentric_operator(source: NodeSet, target: NodeSet, n: int = 0) -> LinearOperator:
    """Lagrange-Chebyshev evaluation (n = 0) or two-stage differentiation operator."""
    if int(n) != n or not 0 <= n <= MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrderError(n, supported="0..4")
    matrix = np.ascontiguousarray(_two_stage_matrix(barycentric_build(source), target, int(n)))
    matrix.setflags(write=False)
    return LinearOperator(
        source_nodes=source,
        target_nodes=target,
        derivative_order=int(n),
        matrix=matrix,
        construction=Construction.LAGRANGE_CHEBYSHEV_TWO_STAGE,
    )
