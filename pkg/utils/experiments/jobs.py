"""
Concrete experiments exposed through the registry, the CLI and the Streamlit app.
"""
import copy
import logging
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from ..geometry.nodes import NodeKind
from ..services.export import trajectory_diagnostics, trajectory_frames
from ..geometry.curve import Topology
from ..simulation.simulate import Simulator, load_sim_config
from ..simulation.waves import trajectory_wave_report
from .base import Experiment, ExperimentResult
from .shapes import TestShapeConfig
from .static import (
    StudyMethod,
    default_epsilon_candidates,
    epsilon_sweep,
    static_error_study,
    study_tables,
)
from .tangential import (
    TangentSource,
    circle_tangent,
    closed_tangential_test,
    fd_tangent_baseline,
    marker_line,
    open_tangential_test,
)

logger = logging.getLogger(__name__)

DEFAULT_N_D = [8, 16, 24, 32, 40, 48, 56, 64, 72, 80]

SIMULATION_PRESETS: Dict[str, Dict[str, Any]] = {
    "closed": {
        "topology": "closed",
        "N_d": 25,
        "N_s": 50,
        "data_node_kind": "equispaced_periodic",
        "kernel": {"family": "multiquadric", "epsilon": 1.1, "metric": "sbf_chordal"},
        "blob": {"delta": "4pi/N_s", "mu": 1.0},
        "dt": 1e-3,
        "t_end": 10.0,
        "force": {"variant": "curvature_restoring", "strength": 0.1, "target_arclength": 1.5 * np.pi},
        "output_every": 100,
        "initial": {"beta": 0.3, "nu": 3},
    },
    "open": {
        "topology": "open_graph",
        "N_d": 20,
        "N_s": 40,
        "data_node_kind": "kte",
        "alpha": 0.85,
        "kernel": {"family": "multiquadric", "epsilon": 1.5, "metric": "sbf_chordal"},
        "blob": {"delta": "2/N_s", "mu": 1.0},
        "dt": 5e-4,
        "t_end": 3.0,
        "force": {
            "variant": "tension_bending",
            "S_T": 0.001,
            "S_B": 0.1,
            "target_shape": {"b": 0.01, "k": 2 * np.pi, "omega": -2 * np.pi},
        },
        "output_every": 100,
        "initial": {"b": 0.01},
    },
}


def merge_documents(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; values in ``overrides`` win."""
    merged = copy.deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_documents(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class InterpErrorConfig(BaseModel):
    methods: List[StudyMethod] = [StudyMethod.SBF, StudyMethod.RBF, StudyMethod.LAGRANGE_CHEBYSHEV]
    node_kind: NodeKind = NodeKind.KTE
    lagrange_node_kind: NodeKind = NodeKind.CHEBYSHEV
    alpha: Optional[float] = 0.85
    n_d: List[int] = DEFAULT_N_D
    epsilon: float | List[float] = 7.0
    n_s: int = Field(default=400, ge=2)
    shape: TestShapeConfig = TestShapeConfig()


class InterpErrorExperiment(Experiment):
    name = "interp-error"
    description = "Max pointwise errors of value, normal and second derivative versus N_d"
    config_model = InterpErrorConfig

    def run(self, config: InterpErrorConfig) -> ExperimentResult:
        reports = {}
        for i, method in enumerate(config.methods):
            kind = config.lagrange_node_kind if method is StudyMethod.LAGRANGE_CHEBYSHEV else config.node_kind
            if method is StudyMethod.FD_BASELINE:
                kind = NodeKind.EQUISPACED
            self.update_status(f"{method.value} on {kind.value} nodes", i / len(config.methods))
            reports[method.value] = static_error_study(
                method, kind, config.n_d, epsilon=config.epsilon, n_s=config.n_s,
                alpha=config.alpha, shape=config.shape,
            )
        summary = {
            name: {
                "first_value_error": r.value_errors[0],
                "last_value_error": r.value_errors[-1],
                "orders_of_magnitude": float(np.log10(r.value_errors[0] / r.value_errors[-1])),
            }
            for name, r in reports.items()
        }
        return ExperimentResult(self.name, config.model_dump(mode="json"), study_tables(reports), summary)


class EpsSweepConfig(BaseModel):
    method: StudyMethod = StudyMethod.SBF
    node_kind: NodeKind = NodeKind.KTE
    alpha: Optional[float] = 0.85
    n_d: List[int] = DEFAULT_N_D
    epsilon_range: Optional[Tuple[float, float]] = None
    epsilon_count: Optional[int] = Field(default=None, ge=2)
    rtol: Optional[float] = Field(default=None, ge=0.0)
    n_s: int = Field(default=400, ge=2)
    shape: TestShapeConfig = TestShapeConfig()


class EpsSweepExperiment(Experiment):
    name = "eps-sweep"
    description = "Best shape parameter per N_d over a candidate grid"
    config_model = EpsSweepConfig

    def run(self, config: EpsSweepConfig) -> ExperimentResult:
        candidates = None
        if config.epsilon_range is not None or config.epsilon_count is not None:
            defaults = default_epsilon_candidates()
            low, high = config.epsilon_range or (defaults[0], defaults[-1])
            candidates = np.linspace(low, high, config.epsilon_count or defaults.size)

        frames, best = [], {}
        for i, n_d in enumerate(config.n_d):
            self.update_status(f"N_d = {n_d}", i / len(config.n_d))
            sweep = epsilon_sweep(
                config.method, config.node_kind, n_d, candidates,
                n_s=config.n_s, alpha=config.alpha, shape=config.shape, rtol=config.rtol,
            )
            frames.append(sweep.to_frame())
            best[str(n_d)] = {
                "epsilon": sweep.best_epsilon,
                "value_error": sweep.best_error,
                "min_value_error": sweep.min_error,
            }
        return ExperimentResult(
            self.name, config.model_dump(mode="json"), pd.concat(frames, ignore_index=True),
            {"best": best},
        )


class StokesletTestConfig(BaseModel):
    case: Literal["closed", "open"] = "closed"
    n_d: Optional[int] = None
    n_s: Optional[int] = None
    epsilon: float = 1.1
    delta: Optional[float] = None
    mu: float = Field(default=1.0, gt=0.0)
    tangent_sources: List[TangentSource] = [TangentSource.SBF]
    node_kinds: List[NodeKind] = [NodeKind.CHEBYSHEV, NodeKind.KTE]
    alpha: Optional[float] = 0.85
    fd_ib_points: Optional[int] = Field(default=800, ge=4)
    marker_count: Optional[int] = Field(default=None, ge=2)


class StokesletTestExperiment(Experiment):
    name = "stokeslet-test"
    description = "Field differences at markers for tangentially forced closed and open curves"
    config_model = StokesletTestConfig

    def run(self, config: StokesletTestConfig) -> ExperimentResult:
        markers = marker_line(count=config.marker_count)
        if config.case == "closed":
            return self._closed(config, markers)
        return self._open(config, markers)

    def _closed(self, config: StokesletTestConfig, markers: np.ndarray) -> ExperimentResult:
        n_d, n_s = config.n_d or 25, config.n_s or 400
        delta = config.delta if config.delta is not None else 4.0 * np.pi / n_s
        runs = [(source.value, n_s, source) for source in config.tangent_sources]
        if config.fd_ib_points:
            runs.append((f"fd_{config.fd_ib_points}", config.fd_ib_points // 2, TangentSource.FD))

        frames, summary = [], {}
        for i, (label, sites, source) in enumerate(runs):
            self.update_status(f"closed: {label}", i / len(runs))
            report = closed_tangential_test(
                n_d=n_d, n_s=sites, epsilon=config.epsilon, delta=delta, mu=config.mu,
                markers=markers, tangent_source=source,
            )
            frames.append(report.to_frame().assign(source=label))
            summary[label] = report.summary()
        return ExperimentResult(
            self.name, config.model_dump(mode="json"), pd.concat(frames, ignore_index=True),
            {"delta": delta, **summary},
        )

    def _open(self, config: StokesletTestConfig, markers: np.ndarray) -> ExperimentResult:
        n_d, n_s = config.n_d or 50, config.n_s or 200
        runs = [(kind, source) for kind in config.node_kinds for source in config.tangent_sources]
        frames, summary = [], {}
        for i, (kind, source) in enumerate(runs):
            label = f"{source.value}_{kind.value}"
            self.update_status(f"open: {label}", i / len(runs))
            report = open_tangential_test(
                n_d=n_d, n_s=n_s, epsilon=config.epsilon, node_kind=kind, alpha=config.alpha,
                tangent_source=source, mu=config.mu, markers=markers,
            )
            frames.append(report.to_frame().assign(source=source.value, node_kind=kind.value))
            summary[label] = report.summary()
        return ExperimentResult(
            self.name, config.model_dump(mode="json"), pd.concat(frames, ignore_index=True), summary
        )


class SimulateConfig(BaseModel):
    case: Literal["closed", "open"] = "closed"
    overrides: Dict[str, Any] = {}


class SimulateExperiment(Experiment):
    name = "simulate"
    description = "Closed-curve relaxation or open-filament time stepping"
    config_model = SimulateConfig

    def run(self, config: SimulateConfig) -> ExperimentResult:
        document = merge_documents(SIMULATION_PRESETS[config.case], config.overrides)
        sim_config = load_sim_config(document)
        simulator = Simulator(sim_config)
        simulator.set_status_callback(self.update_status)
        trajectory = simulator.run()
        echo = {"case": config.case, "sim_config": sim_config.model_dump(mode="json")}
        summary = {**trajectory.summary(), "error": trajectory.error}
        if sim_config.topology is Topology.OPEN_GRAPH and not trajectory.diverged:
            wave = trajectory_wave_report(
                trajectory, simulator.operators, simulator.sample_nodes, sim_config.force.target_shape
            )
            summary["wave"] = wave.to_dict() if wave else None
        return ExperimentResult(
            self.name,
            echo,
            trajectory_frames(trajectory),
            summary,
            extra_tables={"diagnostics": trajectory_diagnostics(trajectory)},
            artifacts={"trajectory": trajectory},
        )


class FdBaselineConfig(BaseModel):
    n_s: List[int] = [100, 200, 400, 800]
    static_n_d: List[int] = DEFAULT_N_D
    n_samples: int = Field(default=400, ge=2)
    shape: TestShapeConfig = TestShapeConfig()


class FdBaselineExperiment(Experiment):
    name = "fd-baseline"
    description = "Halfway-point finite-difference tangents and finite-difference static errors"
    config_model = FdBaselineConfig

    def run(self, config: FdBaselineConfig) -> ExperimentResult:
        rows = []
        for n_s in config.n_s:
            nodes, _, tangents = fd_tangent_baseline(n_s)
            error = np.max(np.linalg.norm(tangents - circle_tangent(nodes.values), axis=1))
            rows.append({"n_s": n_s, "max_tangent_error": float(error)})
        table = pd.DataFrame(rows)
        table["ratio"] = table["max_tangent_error"].shift(1) / table["max_tangent_error"]

        self.update_status("Static finite-difference study", 0.5)
        static = static_error_study(
            StudyMethod.FD_BASELINE, NodeKind.EQUISPACED, config.static_n_d,
            n_s=config.n_samples, shape=config.shape,
        )
        ratios = table["ratio"].dropna()
        summary = {"mean_refinement_ratio": float(ratios.mean()) if len(ratios) else None}
        return ExperimentResult(
            self.name, config.model_dump(mode="json"), table, summary,
            extra_tables={"static": static.to_frame()},
        )
