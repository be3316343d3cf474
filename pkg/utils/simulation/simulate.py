"""
Forward-Euler time stepping of a curve immersed in Stokes flow.

Each step samples the curve, evaluates the force densities at the sample
sites, turns them into point forces and moves the data sites with the
regularized Stokeslet velocity (no-slip).
"""
import logging
import math
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.exceptions import (
    ConfigurationError,
    DegenerateParametrizationError,
    SimulationDivergedError,
)
from ..core.progress import StatusReporter
from ..fluid.stokeslets import BlobModel, ForceSample, evaluate_field
from ..forces.models import ForceModelConfig, make_force_model
from ..geometry.curve import (
    ParametricCurve,
    Topology,
    arclength,
    enclosed_area,
    sample_positions,
)
from ..geometry.interpolation import DistanceMetric, KernelSpec, OperatorBank
from ..geometry.nodes import NodeKind, NodeSet, make_nodes

logger = logging.getLogger(__name__)

_DELTA_RULE = re.compile(
    r"^\s*(?P<coef>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)?\s*\*?\s*(?P<pi>pi|π)?\s*/\s*N_?s\s*$",
    re.IGNORECASE,
)


def resolve_delta(rule: float | str, n_s: int) -> float:
    """
    Resolve a regularization rule such as ``"4pi/N_s"`` or ``"2/N_s"`` to a number.

    Args:
        rule: A number, a numeric string, or ``[c][*]pi/N_s`` / ``c/N_s``
        n_s: Number of sample sites

    Returns:
        The regularization length delta
    """
    if isinstance(rule, (int, float)):
        return float(rule)
    text = str(rule).strip()
    try:
        return float(text)
    except ValueError:
        pass
    match = _DELTA_RULE.match(text)
    if not match or not (match.group("coef") or match.group("pi")):
        raise ConfigurationError(f"Unrecognized delta rule {rule!r}")
    value = float(match.group("coef") or 1.0)
    if match.group("pi"):
        value *= math.pi
    return value / n_s


class InitialShape(BaseModel):
    """Parameters of the built-in initial shapes."""

    model_config = ConfigDict(frozen=True)

    beta: float = 0.3
    nu: int = 3
    b: float = 0.01


class SimConfig(BaseModel):
    """Validated simulation configuration; delta rules are resolved on load."""

    model_config = ConfigDict(frozen=True)

    topology: Topology = Topology.CLOSED
    N_d: int = Field(default=25, ge=1)
    N_s: int = Field(default=50, ge=2)
    data_node_kind: NodeKind = NodeKind.EQUISPACED_PERIODIC
    alpha: Optional[float] = None
    interval: Optional[Tuple[float, float]] = None
    kernel: KernelSpec = KernelSpec(epsilon=1.1)
    blob: BlobModel
    dt: float = Field(default=1e-3, gt=0.0)
    t_end: float = Field(default=10.0, ge=0.0)
    force: ForceModelConfig = ForceModelConfig()
    output_every: int = Field(default=100, ge=1)
    initial: InitialShape = InitialShape()

    @model_validator(mode="before")
    @classmethod
    def _resolve_blob(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        blob = data.get("blob")
        if isinstance(blob, dict) and isinstance(blob.get("delta"), str):
            n_s = int(data.get("N_s", cls.model_fields["N_s"].default))
            data["blob"] = {**blob, "delta": resolve_delta(blob["delta"], n_s)}
        return data

    @model_validator(mode="after")
    def _check_consistency(self) -> "SimConfig":
        if self.blob.delta <= 0:
            raise ValueError("Simulations need a regularized blob (delta > 0)")
        if self.N_d >= self.N_s:
            logger.warning("N_d=%d is not below N_s=%d", self.N_d, self.N_s)
        if self.topology is Topology.CLOSED and self.kernel.metric is not DistanceMetric.SBF_CHORDAL:
            logger.warning("Closed curves are normally interpolated with the SBF metric")
        return self

    @property
    def parameter_interval(self) -> Tuple[float, float]:
        if self.interval is not None:
            return tuple(self.interval)
        return (0.0, 2.0 * np.pi) if self.topology is Topology.CLOSED else (0.0, 1.0)

    @property
    def sample_node_kind(self) -> NodeKind:
        if self.topology is Topology.CLOSED:
            return NodeKind.EQUISPACED_PERIODIC
        return NodeKind.EQUISPACED

    @property
    def step_count(self) -> int:
        return int(round(self.t_end / self.dt))


def load_sim_config(document: Dict[str, Any]) -> SimConfig:
    """Validate a JSON-like document into a SimConfig."""
    try:
        return SimConfig.model_validate(document)
    except ValueError as e:
        raise ConfigurationError(f"Invalid simulation config: {str(e)}") from e


@dataclass
class FrameDiagnostics:
    time: float
    arclength: float
    max_force: float
    max_velocity: float
    area: Optional[float] = None


@dataclass
class Trajectory:
    data_nodes: NodeSet
    topology: Topology
    times: List[float] = field(default_factory=list)
    states: List[np.ndarray] = field(default_factory=list)
    diagnostics: List[FrameDiagnostics] = field(default_factory=list)
    diverged: bool = False
    error: Optional[str] = None

    def record(self, state: ParametricCurve, diagnostics: FrameDiagnostics):
        self.times.append(state.time)
        self.states.append(np.array(state.data_sites))
        self.diagnostics.append(diagnostics)

    @property
    def frames(self) -> int:
        return len(self.times)

    def summary(self) -> Dict[str, Any]:
        return {
            "frames": self.frames,
            "final_arclength": self.diagnostics[-1].arclength if self.diagnostics else None,
            "max_velocity": max((d.max_velocity for d in self.diagnostics), default=None),
            "diverged": self.diverged,
        }


def initial_closed(beta: float, nu: int, nodes: NodeSet) -> ParametricCurve:
    """Perturbed circle ((1 + beta cos(nu l)) cos l, (1 + beta cos(nu l)) sin l)."""
    lam = nodes.values
    radius = 1.0 + beta * np.cos(nu * lam)
    sites = np.column_stack([radius * np.cos(lam), radius * np.sin(lam)])
    return ParametricCurve(topology=Topology.CLOSED, data_nodes=nodes, data_sites=sites)


def initial_open(b: float, nodes: NodeSet) -> ParametricCurve:
    """Graph (lambda, b sin(2 pi lambda))."""
    lam = nodes.values
    sites = np.column_stack([lam, b * np.sin(2.0 * np.pi * lam)])
    return ParametricCurve(topology=Topology.OPEN_GRAPH, data_nodes=nodes, data_sites=sites)


class Simulator(StatusReporter):
    """Runs the sample / force / velocity / update loop for one SimConfig."""

    def __init__(self, config: SimConfig):
        super().__init__()
        self.config = config
        a, b = config.parameter_interval
        self.data_nodes = make_nodes(config.data_node_kind, config.N_d, (a, b), config.alpha)
        self.sample_nodes = make_nodes(config.sample_node_kind, config.N_s, (a, b))
        self.operators = OperatorBank(self.data_nodes, config.kernel)
        self.force_model = make_force_model(config.force)

    def initial_curve(self) -> ParametricCurve:
        shape = self.config.initial
        if self.config.topology is Topology.CLOSED:
            return initial_closed(shape.beta, shape.nu, self.data_nodes)
        return initial_open(shape.b, self.data_nodes)

    def rates(self, state: ParametricCurve, step_index: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Force densities at the sample sites and velocity at the data sites."""
        cfg = self.config
        positions = sample_positions(state, cfg.kernel, self.sample_nodes, self.operators)
        if not np.all(np.isfinite(positions)):
            raise SimulationDivergedError("Non-finite sample sites", step=step_index, time=state.time)
        densities = self.force_model.densities(
            state, cfg.kernel, self.sample_nodes, state.time, self.operators
        )
        forces = ForceSample(
            positions=positions, densities=densities, dlambda=self.sample_nodes.spacing
        )
        velocity = evaluate_field(forces, cfg.blob, state.data_sites).velocity
        if not np.all(np.isfinite(velocity)):
            raise SimulationDivergedError("Non-finite velocity", step=step_index, time=state.time)
        return densities, velocity

    def advance(self, state: ParametricCurve, velocity: np.ndarray, time: float,
                step_index: Optional[int] = None) -> ParametricCurve:
        """Euler update X_d <- X_d + dt u(X_d); graph curves move in y only."""
        sites = np.array(state.data_sites)
        if state.topology is Topology.OPEN_GRAPH:
            sites[:, 1] += self.config.dt * velocity[:, 1]
        else:
            sites += self.config.dt * velocity
        if not np.all(np.isfinite(sites)):
            raise SimulationDivergedError("Non-finite data sites", step=step_index, time=state.time)
        return state.with_sites(sites, time=time)

    def step(self, state: ParametricCurve) -> ParametricCurve:
        _, velocity = self.rates(state)
        return self.advance(state, velocity, state.time + self.config.dt)

    def diagnostics(self, state: ParametricCurve, densities: np.ndarray,
                    velocity: np.ndarray) -> FrameDiagnostics:
        spec = self.config.kernel
        area = None
        if state.topology is Topology.CLOSED:
            area = enclosed_area(state, spec, self.sample_nodes, self.operators)
        return FrameDiagnostics(
            time=state.time,
            arclength=arclength(state, spec, self.sample_nodes, self.operators),
            max_force=float(np.max(np.hypot(densities[:, 0], densities[:, 1]))),
            max_velocity=float(np.max(np.hypot(velocity[:, 0], velocity[:, 1]))),
            area=area,
        )

    def run(self, initial: Optional[ParametricCurve] = None) -> Trajectory:
        """
        Step from the initial curve to t_end, recording every ``output_every`` steps.

        A diverged run is returned truncated with ``diverged`` set and the
        error message kept on the trajectory.
        """
        cfg = self.config
        state = initial if initial is not None else self.initial_curve()
        n_steps = cfg.step_count
        t0 = state.time
        trajectory = Trajectory(data_nodes=state.data_nodes, topology=state.topology)
        logger.info(
            "Simulating %s curve: %d steps of dt=%g (N_d=%d, N_s=%d, delta=%g)",
            state.topology.value, n_steps, cfg.dt, cfg.N_d, cfg.N_s, cfg.blob.delta,
        )
        self.update_status("Running", 0.0)

        for i in range(n_steps + 1):
            try:
                densities, velocity = self.rates(state, step_index=i)
                if i % cfg.output_every == 0 or i == n_steps:
                    trajectory.record(state, self.diagnostics(state, densities, velocity))
                if i == n_steps:
                    break
                state = self.advance(state, velocity, t0 + (i + 1) * cfg.dt, step_index=i)
            except (SimulationDivergedError, DegenerateParametrizationError) as e:
                trajectory.diverged = True
                trajectory.error = str(e)
                logger.warning("Simulation stopped at step %d: %s", i, e)
                self.update_status(f"Error: {str(e)}", 1.0)
                return trajectory
            if n_steps and (i + 1) % max(1, n_steps // 100) == 0:
                self.update_status(f"t = {state.time:.4g}", (i + 1) / n_steps)

        self.update_status("Complete", 1.0)
        logger.info("Simulation finished with %d frames", trajectory.frames)
        return trajectory


def step(state: ParametricCurve, config: SimConfig) -> ParametricCurve:
    """Advance one Euler step."""
    return Simulator(config).step(state)


def run(initial: ParametricCurve, config: SimConfig) -> Trajectory:
    return Simulator(config).run(initial)
