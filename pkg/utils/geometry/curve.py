"""
Lagrangian curve representation and geometric quantities.

A curve stores its data sites at fixed parametric data nodes; everything else
(positions at sample sites, tangents, normals, curvature, arclength) is obtained
by applying evaluation and differentiation operators to the data sites.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from ..core.exceptions import (
    DegenerateParametrizationError,
    InvalidArgumentError,
)
from .interpolation import KernelSpec, OperatorBank, apply
from .nodes import NodeSet

SPEED_FLOOR = 1e-12
GEOMETRY_ORDERS = frozenset({0, 1, 2, 4})


class Topology(str, Enum):
    CLOSED = "closed"
    OPEN_GRAPH = "open_graph"
    OPEN = "open"


class EvaluationSite(str, Enum):
    DATA_SITES = "data_sites"
    SAMPLE_SITES = "sample_sites"


@dataclass(frozen=True, eq=False)
class ParametricCurve:
    """
    A planar curve X(lambda, t) tracked at its data sites.

    For ``open_graph`` the x-coordinate of every data site equals its data node.
    """

    topology: Topology
    data_nodes: NodeSet
    data_sites: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        topology = Topology(self.topology)
        sites = np.array(self.data_sites, dtype=float)
        if sites.shape != (self.data_nodes.count, 2):
            raise InvalidArgumentError(
                f"Data sites must have shape ({self.data_nodes.count}, 2), got {sites.shape}"
            )
        if topology is Topology.OPEN_GRAPH and not np.array_equal(sites[:, 0], self.data_nodes.values):
            raise InvalidArgumentError("Graph curves need x-coordinates equal to the data nodes")
        sites.setflags(write=False)
        object.__setattr__(self, "topology", topology)
        object.__setattr__(self, "data_sites", sites)
        object.__setattr__(self, "time", float(self.time))

    def with_sites(self, data_sites: np.ndarray, time: Optional[float] = None) -> "ParametricCurve":
        """Copy of the curve with new data sites (and optionally a new time)."""
        return ParametricCurve(
            topology=self.topology,
            data_nodes=self.data_nodes,
            data_sites=data_sites,
            time=self.time if time is None else time,
        )


@dataclass(frozen=True, eq=False)
class GeometryBundle:
    nodes: NodeSet
    positions: np.ndarray
    first_derivatives: np.ndarray
    second_derivatives: np.ndarray
    fourth_derivatives: Optional[np.ndarray]
    unit_tangents: np.ndarray
    unit_normals: np.ndarray
    signed_curvature: np.ndarray
    speed: np.ndarray
    evaluated_at: EvaluationSite


def operator_bank(curve: ParametricCurve, spec: Optional[KernelSpec] = None,
                  operators: Optional[OperatorBank] = None) -> OperatorBank:
    """Return ``operators`` after checking it matches the curve, or a fresh kernel bank."""
    if operators is None:
        return OperatorBank(curve.data_nodes, spec)
    if operators.source.key != curve.data_nodes.key:
        raise InvalidArgumentError("Operator bank was built on different data nodes")
    return operators


def coordinate_derivative(curve: ParametricCurve, bank: OperatorBank, target: NodeSet, n: int) -> np.ndarray:
    """
    n-th lambda-derivative of both coordinates at the target nodes, shape (N, 2).

    Graph curves differentiate x = lambda analytically; only y goes through
    the operator.
    """
    op = bank.get(target, n)
    if curve.topology is not Topology.OPEN_GRAPH:
        return apply(op, curve.data_sites)
    out = np.empty((target.count, 2))
    if n == 0:
        out[:, 0] = target.values
    else:
        out[:, 0] = 1.0 if n == 1 else 0.0
    out[:, 1] = apply(op, curve.data_sites[:, 1])
    return out


def _speed(first: np.ndarray) -> np.ndarray:
    speed = np.hypot(first[:, 0], first[:, 1])
    if np.any(speed < SPEED_FLOOR):
        raise DegenerateParametrizationError(
            f"Parametric speed {float(np.min(speed)):.3e} below {SPEED_FLOOR:g}"
        )
    return speed


def geometry(curve: ParametricCurve, spec: Optional[KernelSpec], target: NodeSet,
             orders: Iterable[int] = (0, 1, 2),
             operators: Optional[OperatorBank] = None) -> GeometryBundle:
    """
    Evaluate positions, derivatives and frame quantities at target nodes.

    Orders 0, 1 and 2 are always computed (the frame and curvature need them);
    order 4 is added when requested.

    Args:
        curve: Curve to evaluate
        spec: Kernel used when no operator bank is given
        target: Target nodes
        orders: Requested derivative orders, a subset of {0, 1, 2, 4}
        operators: Optional precomputed operator bank on the curve's data nodes

    Returns:
        GeometryBundle at the target nodes

    Raises:
        DegenerateParametrizationError: If the speed collapses at any target node
    """
    orders = set(orders)
    if not orders <= GEOMETRY_ORDERS:
        raise InvalidArgumentError(f"Geometry orders must be a subset of {sorted(GEOMETRY_ORDERS)}")
    bank = operator_bank(curve, spec, operators)

    positions = coordinate_derivative(curve, bank, target, 0)
    first = coordinate_derivative(curve, bank, target, 1)
    second = coordinate_derivative(curve, bank, target, 2)
    fourth = coordinate_derivative(curve, bank, target, 4) if 4 in orders else None

    speed = _speed(first)
    tangents = first / speed[:, np.newaxis]
    normals = np.column_stack([first[:, 1], -first[:, 0]]) / speed[:, np.newaxis]
    kappa = (first[:, 0] * second[:, 1] - first[:, 1] * second[:, 0]) / speed ** 3

    site = (
        EvaluationSite.DATA_SITES
        if target.key == curve.data_nodes.key
        else EvaluationSite.SAMPLE_SITES
    )
    return GeometryBundle(
        nodes=target,
        positions=positions,
        first_derivatives=first,
        second_derivatives=second,
        fourth_derivatives=fourth,
        unit_tangents=tangents,
        unit_normals=normals,
        signed_curvature=kappa,
        speed=speed,
        evaluated_at=site,
    )


def _weight(sample: NodeSet) -> float:
    if sample.spacing is None:
        raise InvalidArgumentError("Arclength quadrature needs uniformly weighted sample nodes")
    return sample.spacing


def arclength(curve: ParametricCurve, spec: Optional[KernelSpec], sample: NodeSet,
              operators: Optional[OperatorBank] = None) -> float:
    """Rectangle-rule arclength sum_j ||X_lambda(lambda_j)|| dlambda over the sample nodes."""
    weight = _weight(sample)
    first = coordinate_derivative(curve, operator_bank(curve, spec, operators), sample, 1)
    return float(np.sum(_speed(first)) * weight)


def enclosed_area(curve: ParametricCurve, spec: Optional[KernelSpec], sample: NodeSet,
                  operators: Optional[OperatorBank] = None) -> float:
    """Signed area 1/2 oint (x y' - y x') dlambda of a closed curve (positive for CCW)."""
    if curve.topology is not Topology.CLOSED:
        raise InvalidArgumentError("Enclosed area is defined for closed curves only")
    weight = _weight(sample)
    bank = operator_bank(curve, spec, operators)
    pos = coordinate_derivative(curve, bank, sample, 0)
    first = coordinate_derivative(curve, bank, sample, 1)
    return float(0.5 * np.sum(pos[:, 0] * first[:, 1] - pos[:, 1] * first[:, 0]) * weight)


def sample_positions(curve: ParametricCurve, spec: Optional[KernelSpec], sample: NodeSet,
                     operators: Optional[OperatorBank] = None) -> np.ndarray:
    """Positions of the sample sites, shape (N_s, 2)."""
    return coordinate_derivative(curve, operator_bank(curve, spec, operators), sample, 0)
