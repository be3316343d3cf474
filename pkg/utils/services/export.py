"""
CSV and JSON writers for experiment reports, trajectories and debug dumps.

Floats are written with 17 significant digits so every value round-trips.
"""
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from ..core.exceptions import ReportError
from ..fluid.stokeslets import FieldSample
from ..geometry.curve import GeometryBundle
from ..geometry.interpolation import LinearOperator
from ..geometry.nodes import NodeSet
from ..simulation.simulate import Trajectory
from .report_service import ReportService

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"


def _default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def to_json(document: Any) -> str:
    return json.dumps(document, indent=2, default=_default)


def write_json(document: Any, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(document) + "\n")
    return path


def write_csv(frame: pd.DataFrame, path: str | os.PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def trajectory_frames(trajectory: Trajectory) -> pd.DataFrame:
    """Long table with columns t, lambda, x, y."""
    lam = trajectory.data_nodes.values
    states = trajectory.states or [np.empty((0, 2))]
    return pd.DataFrame({
        "t": np.repeat(trajectory.times, lam.size),
        "lambda": np.tile(lam, trajectory.frames),
        "x": np.concatenate([s[:, 0] for s in states]),
        "y": np.concatenate([s[:, 1] for s in states]),
    })


def trajectory_diagnostics(trajectory: Trajectory) -> pd.DataFrame:
    return pd.DataFrame([vars(d) for d in trajectory.diagnostics])


def write_trajectory(trajectory: Trajectory, out_dir: str | os.PathLike) -> Dict[str, Path]:
    """trajectory.csv with columns t,lambda,x,y and summary.json."""
    out_dir = Path(out_dir)
    return {
        "trajectory": write_csv(trajectory_frames(trajectory), out_dir / "trajectory.csv"),
        "summary": write_json(trajectory.summary(), out_dir / "summary.json"),
    }


def write_result(result, out_dir: str | os.PathLike, render_markdown: bool = True) -> Dict[str, Path]:
    """
    Write report.csv, report.json, any extra tables and report.md for a result

    Args:
        result: ExperimentResult to write
        out_dir: Output directory (created if needed)
        render_markdown: Also render the Markdown summary

    Returns:
        Mapping of artifact name to written path
    """
    out_dir = Path(out_dir)
    try:
        paths = {
            "csv": write_csv(result.table, out_dir / "report.csv"),
            "json": write_json(
                {"experiment": result.name, "config": result.config, "summary": result.summary},
                out_dir / "report.json",
            ),
        }
        for name, frame in result.extra_tables.items():
            paths[name] = write_csv(frame, out_dir / f"{name}.csv")
        if "trajectory" in result.artifacts:
            paths.update(write_trajectory(result.artifacts["trajectory"], out_dir))
        if render_markdown:
            report_path = out_dir / "report.md"
            report_path.write_text(ReportService().render_report(result))
            paths["markdown"] = report_path
    except OSError as e:
        raise ReportError(f"Writing report to {out_dir} failed: {str(e)}") from e
    logger.info("Wrote %s report to %s", result.name, out_dir)
    return paths


def dump_operator(op: LinearOperator, path: str | os.PathLike) -> Path:
    """Dense matrix CSV: one row per target node, one column per source node."""
    frame = pd.DataFrame(
        op.matrix,
        columns=[f"{v:.17g}" for v in op.source_nodes.values],
    )
    frame.insert(0, "lambda", op.target_nodes.values)
    return write_csv(frame, path)


def dump_geometry(bundle: GeometryBundle, path: str | os.PathLike) -> Path:
    """CSV lambda,x,y,xp,yp,kappa,nx,ny."""
    frame = pd.DataFrame({
        "lambda": bundle.nodes.values,
        "x": bundle.positions[:, 0],
        "y": bundle.positions[:, 1],
        "xp": bundle.first_derivatives[:, 0],
        "yp": bundle.first_derivatives[:, 1],
        "kappa": bundle.signed_curvature,
        "nx": bundle.unit_normals[:, 0],
        "ny": bundle.unit_normals[:, 1],
    })
    return write_csv(frame, path)


def dump_forces(nodes: NodeSet, densities: np.ndarray, path: str | os.PathLike) -> Path:
    """CSV lambda,Fx,Fy."""
    frame = pd.DataFrame({"lambda": nodes.values, "Fx": densities[:, 0], "Fy": densities[:, 1]})
    return write_csv(frame, path)


def dump_field(field: FieldSample, path: str | os.PathLike) -> Path:
    """CSV x,y,p,u,v."""
    frame = pd.DataFrame({
        "x": field.points[:, 0],
        "y": field.points[:, 1],
        "p": field.pressure,
        "u": field.velocity[:, 0],
        "v": field.velocity[:, 1],
    })
    return write_csv(frame, path)
