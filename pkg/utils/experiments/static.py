"""
Static interpolation error studies on the perturbed sinusoid.

Every method is run through the same graph-curve geometry path: data nodes
on [0, 1], exact Y_P at the data nodes, and errors measured at equispaced
sample nodes against the closed-form reference.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..core.config import get_app_setting
from ..core.exceptions import InvalidArgumentError, SimulationToolkitError
from ..geometry.curve import ParametricCurve, Topology, geometry
from ..geometry.interpolation import DistanceMetric, InterpolationMethod, KernelSpec, OperatorBank
from ..geometry.nodes import NodeKind, equispaced, make_nodes
from .shapes import TestShapeConfig, max_pointwise_l2, perturbed_derivatives, reference_geometry

logger = logging.getLogger(__name__)

INTERVAL = (0.0, 1.0)


class StudyMethod(str, Enum):
    SBF = "sbf"
    RBF = "rbf"
    LAGRANGE_CHEBYSHEV = "lagrange_chebyshev"
    FD_BASELINE = "fd_baseline"


@dataclass
class ErrorReport:
    method: StudyMethod
    node_kind: str
    n_d: List[int] = field(default_factory=list)
    epsilon: List[Optional[float]] = field(default_factory=list)
    value_errors: List[float] = field(default_factory=list)
    normal_errors: List[float] = field(default_factory=list)
    second_derivative_errors: List[float] = field(default_factory=list)

    def add(self, n_d: int, epsilon: Optional[float], errors: Sequence[float]):
        self.n_d.append(int(n_d))
        self.epsilon.append(epsilon)
        value, normal, second = errors
        self.value_errors.append(value)
        self.normal_errors.append(normal)
        self.second_derivative_errors.append(second)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "method": self.method.value,
            "node_kind": self.node_kind,
            "n_d": self.n_d,
            "epsilon": self.epsilon,
            "value_error": self.value_errors,
            "normal_error": self.normal_errors,
            "second_derivative_error": self.second_derivative_errors,
        })


@dataclass
class EpsilonSweep:
    """
    Value errors over candidate shape parameters for one N_d.

    The error is flat near its minimum, so the pick is the largest candidate
    whose error is within ``rtol`` of the minimum (the best-conditioned of the
    near-optimal ones). ``rtol = 0`` gives the plain argmin.
    """

    method: StudyMethod
    node_kind: str
    n_d: int
    epsilons: np.ndarray
    errors: np.ndarray
    rtol: float = 0.0

    @property
    def min_error(self) -> float:
        return float(np.min(self.errors))

    @property
    def best_index(self) -> int:
        if not np.isfinite(self.min_error):
            return int(np.argmin(self.errors))
        near = np.flatnonzero(self.errors <= (1.0 + self.rtol) * self.min_error)
        return int(near[np.argmax(self.epsilons[near])])

    @property
    def best_epsilon(self) -> float:
        return float(self.epsilons[self.best_index])

    @property
    def best_error(self) -> float:
        return float(self.errors[self.best_index])

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({
            "method": self.method.value,
            "node_kind": self.node_kind,
            "n_d": self.n_d,
            "epsilon": self.epsilons,
            "value_error": self.errors,
        })
        frame["is_best"] = frame.index == self.best_index
        return frame


def kernel_for(method: StudyMethod, epsilon: float) -> KernelSpec:
    metric = DistanceMetric.SBF_CHORDAL if method is StudyMethod.SBF else DistanceMetric.RBF_ABSOLUTE
    return KernelSpec(epsilon=epsilon, metric=metric)


def _interpolant_errors(method: StudyMethod, node_kind: NodeKind, n_d: int, epsilon: Optional[float],
                        n_s: int, alpha: Optional[float], shape: TestShapeConfig, warn: bool = True):
    nodes = make_nodes(node_kind, n_d, INTERVAL, alpha)
    sample = equispaced(n_s, *INTERVAL)
    y, _, _ = perturbed_derivatives(nodes.values, shape)
    curve = ParametricCurve(
        topology=Topology.OPEN_GRAPH,
        data_nodes=nodes,
        data_sites=np.column_stack([nodes.values, y]),
    )
    if method is StudyMethod.LAGRANGE_CHEBYSHEV:
        spec, bank = None, OperatorBank(nodes, method=InterpolationMethod.LAGRANGE_CHEBYSHEV)
    else:
        spec = kernel_for(method, epsilon)
        bank = OperatorBank(nodes, spec, warn=warn)
    geom = geometry(curve, spec, sample, operators=bank)
    positions, normals, second = reference_geometry(sample.values, shape)
    return (
        max_pointwise_l2(geom.positions, positions),
        max_pointwise_l2(geom.unit_normals, normals),
        max_pointwise_l2(geom.second_derivatives, second),
    )


def _fd_errors(n_d: int, n_s: int, shape: TestShapeConfig):
    """Second-order differences on endpoint-inclusive equispaced data, linear interpolation to samples."""
    lam = np.linspace(*INTERVAL, n_d)
    h = lam[1] - lam[0]
    y, _, _ = perturbed_derivatives(lam, shape)
    y1 = np.gradient(y, h, edge_order=2)
    y2 = np.gradient(y1, h, edge_order=2)

    sample = equispaced(n_s, *INTERVAL).values
    ys, y1s, y2s = (np.interp(sample, lam, v) for v in (y, y1, y2))
    norm = np.sqrt(1.0 + y1s * y1s)
    positions, normals, second = reference_geometry(sample, shape)
    return (
        max_pointwise_l2(np.column_stack([sample, ys]), positions),
        max_pointwise_l2(np.column_stack([y1s / norm, -1.0 / norm]), normals),
        max_pointwise_l2(np.column_stack([np.zeros_like(sample), y2s]), second),
    )


def _epsilon_list(epsilon, n_d_list: Sequence[int]) -> List[Optional[float]]:
    if epsilon is None or np.isscalar(epsilon):
        return [epsilon] * len(n_d_list)
    epsilon = list(epsilon)
    if len(epsilon) != len(n_d_list):
        raise InvalidArgumentError("Per-N_d epsilon list must match the N_d list")
    return epsilon


def static_error_study(method: StudyMethod | str, node_kind: NodeKind | str, n_d_list: Sequence[int],
                       epsilon=7.0, n_s: int = 400, alpha: Optional[float] = 0.85,
                       shape: TestShapeConfig = TestShapeConfig(),
                       progress: Optional[Callable[[float], None]] = None) -> ErrorReport:
    """
    Value, normal and second-derivative errors for each N_d.

    Args:
        method: sbf, rbf, lagrange_chebyshev or fd_baseline
        node_kind: Data node family (fd_baseline always uses equispaced data)
        n_d_list: Data node counts
        epsilon: Shape parameter, or one per N_d (ignored by non-kernel methods)
        n_s: Number of equispaced sample nodes
        alpha: KTE parameter
        shape: Test shape parameters
        progress: Optional callback receiving the completed fraction

    Returns:
        ErrorReport with one error triple per N_d
    """
    method = StudyMethod(method)
    node_kind = NodeKind(node_kind)
    kernel_method = method in (StudyMethod.SBF, StudyMethod.RBF)
    eps_values = _epsilon_list(epsilon if kernel_method else None, n_d_list)
    report = ErrorReport(
        method=method,
        node_kind=NodeKind.EQUISPACED.value if method is StudyMethod.FD_BASELINE else node_kind.value,
    )
    for i, (n_d, eps) in enumerate(zip(n_d_list, eps_values)):
        if method is StudyMethod.FD_BASELINE:
            errors = _fd_errors(n_d, n_s, shape)
        else:
            errors = _interpolant_errors(method, node_kind, n_d, eps, n_s, alpha, shape)
        logger.debug("%s N_d=%d errors=%s", method.value, n_d, errors)
        report.add(n_d, eps, errors)
        if progress:
            progress((i + 1) / len(n_d_list))
    return report


def default_epsilon_candidates() -> np.ndarray:
    low, high = get_app_setting("experiments.epsilon_range")
    return np.linspace(low, high, int(get_app_setting("experiments.epsilon_count")))


def epsilon_sweep(method: StudyMethod | str, node_kind: NodeKind | str, n_d: int,
                  epsilon_candidates: Optional[Sequence[float]] = None, n_s: int = 400,
                  alpha: Optional[float] = 0.85, shape: TestShapeConfig = TestShapeConfig(),
                  rtol: Optional[float] = None) -> EpsilonSweep:
    """
    Value error over a set of candidate shape parameters for one N_d.

    Candidates whose system cannot be solved score +inf. Operators are built
    with ill-conditioning warnings off, since most flat candidates trigger them;
    the condition notes stay on the operators.

    Args:
        rtol: Near-optimal tolerance of the pick, defaults to
            ``experiments.epsilon_rtol``
    """
    method = StudyMethod(method)
    if method not in (StudyMethod.SBF, StudyMethod.RBF):
        raise InvalidArgumentError("Epsilon sweeps apply to kernel methods only")
    node_kind = NodeKind(node_kind)
    candidates = np.asarray(
        default_epsilon_candidates() if epsilon_candidates is None else epsilon_candidates,
        dtype=float,
    )
    if rtol is None:
        rtol = float(get_app_setting("experiments.epsilon_rtol"))
    if rtol < 0:
        raise InvalidArgumentError("rtol must be non-negative")
    errors = np.empty_like(candidates)
    for i, eps in enumerate(candidates):
        try:
            value, _, _ = _interpolant_errors(method, node_kind, n_d, eps, n_s, alpha, shape, warn=False)
        except SimulationToolkitError as e:
            logger.debug("epsilon=%g skipped: %s", eps, e)
            value = np.inf
        errors[i] = value if np.isfinite(value) else np.inf
    return EpsilonSweep(method=method, node_kind=node_kind.value, n_d=int(n_d),
                        epsilons=candidates, errors=errors, rtol=rtol)


def study_tables(reports: Dict[str, ErrorReport]) -> pd.DataFrame:
    """Concatenate several reports into one long table."""
    return pd.concat([r.to_frame() for r in reports.values()], ignore_index=True)
