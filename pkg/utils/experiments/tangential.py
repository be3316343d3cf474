"""
Stokeslet tests driven by a prescribed tangential force.

Closed case: unit circle, regularized Stokeslets, tangents from the SBF (or
RBF, finite differences, or the exact circle) compared with exact tangents.
Open case: graph (lambda, sin lambda) on [0, 2 pi], singular Stokeslets, forces
from interpolated tangents compared with a dense exact discretization.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from ..core.config import get_app_setting
from ..core.exceptions import InvalidArgumentError
from ..fluid.stokeslets import BlobModel, FieldSample, ForceSample, evaluate_field, singular_field
from ..forces.models import prescribed_tangential
from ..geometry.curve import ParametricCurve, Topology, geometry
from ..geometry.interpolation import DistanceMetric, KernelSpec
from ..geometry.nodes import NodeKind, NodeSet, equispaced, equispaced_periodic, make_nodes

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


class TangentSource(str, Enum):
    SBF = "sbf"
    RBF = "rbf"
    ANALYTIC = "analytic"
    FD = "fd"


def marker_line(x_range: Tuple[float, float] = (0.4, 1.8), y: float = 0.2,
                count: Optional[int] = None) -> np.ndarray:
    """Equispaced markers (x, y) along a horizontal segment."""
    count = count or int(get_app_setting("experiments.marker_count"))
    xs = np.linspace(x_range[0], x_range[1], count)
    return np.column_stack([xs, np.full_like(xs, y)])


def total_variation(values) -> float:
    return float(np.sum(np.abs(np.diff(np.asarray(values, dtype=float)))))


def circle_position(lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    return np.column_stack([np.cos(lam), np.sin(lam)])


def circle_tangent(lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    return np.column_stack([-np.sin(lam), np.cos(lam)])


def fd_tangent_baseline(n_s: int, position: Callable[[np.ndarray], np.ndarray] = circle_position,
                        interval: Tuple[float, float] = (0.0, TWO_PI)) -> Tuple[NodeSet, np.ndarray, np.ndarray]:
    """
    Centered differences of positions at the halfway points between IB points.

    X_lambda(lambda_j) ~ (X(lambda_j + h/2) - X(lambda_j - h/2)) / h, so 2 N_s
    positions in total are used.

    Returns:
        (sample nodes, positions at the nodes, tangent vectors X_lambda)
    """
    nodes = equispaced_periodic(n_s, *interval)
    h = nodes.spacing
    tangents = (position(nodes.values + 0.5 * h) - position(nodes.values - 0.5 * h)) / h
    return nodes, position(nodes.values), tangents


@dataclass
class TangentialReport:
    case: str
    markers: np.ndarray
    computed: FieldSample
    reference: FieldSample
    config: Dict[str, Any] = field(default_factory=dict)
    interpolation_only: Optional[FieldSample] = None

    @property
    def pressure_error(self) -> np.ndarray:
        return np.abs(self.computed.pressure - self.reference.pressure)

    @property
    def velocity_error(self) -> np.ndarray:
        return np.abs(self.computed.velocity - self.reference.velocity)

    def interpolation_error(self) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        if self.interpolation_only is None:
            return None
        return (
            np.abs(self.computed.pressure - self.interpolation_only.pressure),
            np.abs(self.computed.velocity - self.interpolation_only.velocity),
        )

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({
            "x": self.markers[:, 0],
            "y": self.markers[:, 1],
            "p_error": self.pressure_error,
            "u_error": self.velocity_error[:, 0],
            "v_error": self.velocity_error[:, 1],
        })
        split = self.interpolation_error()
        if split is not None:
            frame["p_interp_error"] = split[0]
            frame["u_interp_error"] = split[1][:, 0]
            frame["v_interp_error"] = split[1][:, 1]
        return frame

    def decay_slope(self, x_from: float = 1.0) -> Optional[float]:
        """
        Least-squares slope of log10 |p error| against x - x_from over the
        markers at x >= x_from. Negative when the error decays away from the
        curve; None when fewer than two markers qualify or an error is zero.
        """
        beyond = self.markers[:, 0] >= x_from
        errors = self.pressure_error[beyond]
        if errors.size < 2 or np.any(errors <= 0.0):
            return None
        slope, _ = np.polyfit(self.markers[beyond, 0] - x_from, np.log10(errors), 1)
        return float(slope)

    def summary(self) -> Dict[str, float]:
        summary = {
            "max_p_error": float(np.max(self.pressure_error)),
            "max_u_error": float(np.max(self.velocity_error[:, 0])),
            "max_v_error": float(np.max(self.velocity_error[:, 1])),
            "p_error_total_variation": total_variation(self.pressure_error),
        }
        slope = self.decay_slope() if self.case == "closed" else None
        if slope is not None:
            summary["p_error_decay_slope"] = slope
        return summary


def _closed_forces(source: TangentSource, n_d: int, n_s: int, epsilon: float) -> ForceSample:
    sample = equispaced_periodic(n_s, 0.0, TWO_PI)
    if source is TangentSource.ANALYTIC:
        positions, first = circle_position(sample.values), circle_tangent(sample.values)
    elif source is TangentSource.FD:
        sample, positions, first = fd_tangent_baseline(n_s)
    else:
        metric = DistanceMetric.SBF_CHORDAL if source is TangentSource.SBF else DistanceMetric.RBF_ABSOLUTE
        nodes = equispaced_periodic(n_d, 0.0, TWO_PI)
        curve = ParametricCurve(
            topology=Topology.CLOSED, data_nodes=nodes, data_sites=circle_position(nodes.values)
        )
        geom = geometry(curve, KernelSpec(epsilon=epsilon, metric=metric), sample)
        positions, first = geom.positions, geom.first_derivatives
    return ForceSample(
        positions=positions,
        densities=prescribed_tangential(first, sample),
        dlambda=sample.spacing,
    )


def closed_tangential_test(n_d: int = 25, n_s: int = 400, epsilon: float = 1.1,
                           delta: Optional[float] = None, mu: float = 1.0,
                           markers: Optional[np.ndarray] = None,
                           tangent_source: TangentSource | str = TangentSource.SBF,
                           reference_source: TangentSource | str = TangentSource.ANALYTIC,
                           reference_n_s: Optional[int] = None) -> TangentialReport:
    """
    Compare regularized fields driven by computed tangents with the exact-tangent field.

    Args:
        n_d: Data sites on the circle (kernel sources only)
        n_s: Sample sites of the computed pipeline
        epsilon: Shape parameter
        delta: Regularization length; defaults to 4 pi / n_s
        mu: Viscosity
        markers: Evaluation points; defaults to the y = 1/5 marker line
        tangent_source: Tangents of the computed pipeline
        reference_source: Tangents of the reference pipeline
        reference_n_s: Sample sites of the reference pipeline (defaults to n_s)

    Returns:
        TangentialReport with absolute differences at the markers
    """
    tangent_source = TangentSource(tangent_source)
    reference_source = TangentSource(reference_source)
    reference_n_s = reference_n_s or n_s
    delta = 4.0 * np.pi / n_s if delta is None else delta
    markers = marker_line() if markers is None else np.asarray(markers, dtype=float)
    blob = BlobModel(delta=delta, mu=mu)

    computed = evaluate_field(_closed_forces(tangent_source, n_d, n_s, epsilon), blob, markers)
    reference = evaluate_field(_closed_forces(reference_source, n_d, reference_n_s, epsilon), blob, markers)
    logger.info("Closed tangential test: %s vs %s, N_d=%d, N_s=%d, delta=%g",
                tangent_source.value, reference_source.value, n_d, n_s, delta)
    return TangentialReport(
        case="closed",
        markers=markers,
        computed=computed,
        reference=reference,
        config={
            "n_d": n_d, "n_s": n_s, "epsilon": epsilon, "delta": delta, "mu": mu,
            "tangent_source": tangent_source.value, "reference_source": reference_source.value,
            "reference_n_s": reference_n_s,
        },
    )


def _graph_forces(nodes: NodeSet, source: TangentSource, spec: Optional[KernelSpec],
                  data_nodes: Optional[NodeSet]) -> ForceSample:
    if source is TangentSource.ANALYTIC:
        lam = nodes.values
        positions = np.column_stack([lam, np.sin(lam)])
        first = np.column_stack([np.ones_like(lam), np.cos(lam)])
    else:
        curve = ParametricCurve(
            topology=Topology.OPEN_GRAPH,
            data_nodes=data_nodes,
            data_sites=np.column_stack([data_nodes.values, np.sin(data_nodes.values)]),
        )
        geom = geometry(curve, spec, nodes)
        positions, first = geom.positions, geom.first_derivatives
    return ForceSample(positions=positions, densities=prescribed_tangential(first, nodes),
                       dlambda=nodes.spacing)


def open_tangential_test(n_d: int = 50, n_s: int = 200, epsilon: float = 1.1,
                         node_kind: NodeKind | str = NodeKind.KTE, alpha: Optional[float] = 0.85,
                         tangent_source: TangentSource | str = TangentSource.SBF,
                         n_ref: Optional[int] = None, mu: float = 1.0,
                         markers: Optional[np.ndarray] = None) -> TangentialReport:
    """
    Singular-Stokeslet comparison for the open graph (lambda, sin lambda).

    The reference uses exact tangents at n_ref >= 4 n_s equispaced nodes; the
    interpolation-only field uses exact tangents at the same n_s nodes.

    Raises:
        EvaluationAtSingularityError: If a marker sits on a force location
    """
    tangent_source = TangentSource(tangent_source)
    n_ref = n_ref or 4 * n_s
    markers = marker_line() if markers is None else np.asarray(markers, dtype=float)
    sample = equispaced(n_s, 0.0, TWO_PI)

    data_nodes, spec = None, None
    if tangent_source in (TangentSource.SBF, TangentSource.RBF):
        data_nodes = make_nodes(node_kind, n_d, (0.0, TWO_PI), alpha)
        metric = DistanceMetric.SBF_CHORDAL if tangent_source is TangentSource.SBF else DistanceMetric.RBF_ABSOLUTE
        spec = KernelSpec(epsilon=epsilon, metric=metric)
    elif tangent_source is TangentSource.FD:
        raise InvalidArgumentError("Finite-difference tangents are only available for the closed test")

    computed = singular_field(_graph_forces(sample, tangent_source, spec, data_nodes), mu, markers)
    reference = singular_field(
        _graph_forces(equispaced(n_ref, 0.0, TWO_PI), TangentSource.ANALYTIC, None, None), mu, markers
    )
    same_nodes = singular_field(_graph_forces(sample, TangentSource.ANALYTIC, None, None), mu, markers)
    logger.info("Open tangential test: %s, %s nodes, N_d=%d, N_s=%d, N_ref=%d",
                tangent_source.value, NodeKind(node_kind).value, n_d, n_s, n_ref)
    return TangentialReport(
        case="open",
        markers=markers,
        computed=computed,
        reference=reference,
        interpolation_only=same_nodes,
        config={
            "n_d": n_d, "n_s": n_s, "n_ref": n_ref, "epsilon": epsilon,
            "node_kind": NodeKind(node_kind).value, "alpha": alpha, "mu": mu,
            "tangent_source": tangent_source.value,
        },
    )
