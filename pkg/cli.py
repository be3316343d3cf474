"""
Command line front-end for the RBF-Stokeslets toolkit.

Every experiment subcommand reads an optional JSON config, writes
report.csv, report.json and report.md into --out, and logs status updates.
"""
import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click

from utils.core.config import configure_logging, get_output_dir
from utils.core.exceptions import BatchError, SimulationToolkitError
from utils.experiments.jobs import SIMULATION_PRESETS, merge_documents
from utils.experiments.registry import registry
from utils.fluid.stokeslets import ForceSample, evaluate_grid
from utils.geometry.curve import geometry, sample_positions
from utils.geometry.nodes import NodeKind, make_nodes
from utils.orchestration.orchestrator import ExperimentOrchestrator
from utils.simulation.simulate import Simulator, load_sim_config
from utils.services.export import (
    FLOAT_FORMAT,
    dump_field,
    dump_forces,
    dump_geometry,
    dump_operator,
    write_result,
)

logger = logging.getLogger("rbf_stokeslets")


def _load_document(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        return {}
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise click.BadParameter(f"cannot read config {path}: {e}", param_hint="--config")


def _parse_interval(value: str):
    try:
        a, b = (float(part) for part in value.split(","))
    except ValueError:
        raise click.BadParameter("expected a,b", param_hint="--interval")
    return a, b


def _log_status(name: str) -> Callable[[str, float], None]:
    def callback(status: str, progress: float):
        logger.info("[%s] %s (%.0f%%)", name, status, 100 * progress)
    return callback


def _run_experiment(name: str, config_path: Optional[str], out: Optional[str],
                    extra: Optional[Dict[str, Any]] = None):
    document = _load_document(config_path)
    if extra:
        document.update(extra)
    experiment = registry.create(name)
    experiment.set_status_callback(_log_status(name))
    try:
        result = experiment.run_document(document)
        paths = write_result(result, Path(out or get_output_dir()) / name)
    except SimulationToolkitError as e:
        raise click.ClickException(str(e))
    click.echo(json.dumps(result.summary, indent=2, default=str))
    click.echo(f"Report written to {paths['csv'].parent}")
    return result


config_option = click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                             help="JSON config document")
out_option = click.option("--out", type=click.Path(file_okay=False),
                          help="Output directory (default: output/<experiment>)")
case_option = click.option("--case", type=click.Choice(["closed", "open"]), default="closed",
                           show_default=True)


@click.group()
@click.option("--log-level", default=None, help="Logging level (default from settings)")
def cli(log_level: Optional[str]):
    """Meshfree curve interpolation coupled to regularized Stokeslets."""
    configure_logging(log_level)


@cli.command()
@click.option("--kind", type=click.Choice([k.value for k in NodeKind]), required=True)
@click.option("--n", "count", type=int, required=True)
@click.option("--interval", default="0,1", show_default=True, help="a,b")
@click.option("--alpha", type=float, default=None, help="KTE stretching parameter in (0, 1]")
def nodes(kind: str, count: int, interval: str, alpha: Optional[float]):
    """Print a node set, one node per line."""
    try:
        node_set = make_nodes(kind, count, _parse_interval(interval), alpha)
    except SimulationToolkitError as e:
        raise click.ClickException(str(e))
    for value in node_set.values:
        click.echo(FLOAT_FORMAT % value)


@cli.command("interp-error")
@config_option
@out_option
def interp_error(config_path, out):
    """Static interpolation error study versus N_d."""
    _run_experiment("interp-error", config_path, out)


@cli.command("eps-sweep")
@config_option
@out_option
def eps_sweep(config_path, out):
    """Best shape parameter per N_d."""
    _run_experiment("eps-sweep", config_path, out)


@cli.command("stokeslet-test")
@case_option
@config_option
@out_option
def stokeslet_test(case, config_path, out):
    """Tangential-force Stokeslet comparison at the marker line."""
    _run_experiment("stokeslet-test", config_path, out, {"case": case})


@cli.command("fd-baseline")
@config_option
@out_option
def fd_baseline(config_path, out):
    """Finite-difference tangent and static baselines."""
    _run_experiment("fd-baseline", config_path, out)


@cli.command()
@case_option
@config_option
@out_option
@click.option("--dump-operator", "operator_path", type=click.Path(dir_okay=False), help="CSV of the data-to-sample operator")
@click.option("--dump-geometry", "geometry_path", type=click.Path(dir_okay=False), help="CSV of the final sample geometry")
@click.option("--dump-forces", "forces_path", type=click.Path(dir_okay=False), help="CSV of the final force densities")
@click.option("--dump-field", "field_path", type=click.Path(dir_okay=False), help="CSV of the final flow field on --grid")
@click.option("--grid", default=None, help="x0,x1,nx,y0,y1,ny")
def simulate(case, config_path, out, operator_path, geometry_path, forces_path, field_path, grid):
    """Closed relaxation or open filament time stepping.

    The config document is a partial simulation config merged over the preset
    for --case.
    """
    if field_path and not grid:
        raise click.UsageError("--dump-field needs --grid")
    overrides = _load_document(config_path)
    result = _run_experiment("simulate", None, out, {"case": case, "overrides": overrides})
    trajectory = result.artifacts["trajectory"]
    if not (operator_path or geometry_path or forces_path or field_path) or not trajectory.frames:
        return

    try:
        simulator = Simulator(load_sim_config(merge_documents(SIMULATION_PRESETS[case], overrides)))
        state = simulator.initial_curve().with_sites(trajectory.states[-1], time=trajectory.times[-1])
        spec, sample, bank = simulator.config.kernel, simulator.sample_nodes, simulator.operators
        if operator_path:
            dump_operator(bank.get(sample, 0), operator_path)
        if geometry_path:
            dump_geometry(geometry(state, spec, sample, operators=bank), geometry_path)
        densities = simulator.force_model.densities(state, spec, sample, state.time, bank)
        if forces_path:
            dump_forces(sample, densities, forces_path)
        if field_path:
            forces = ForceSample(
                positions=sample_positions(state, spec, sample, bank),
                densities=densities,
                dlambda=sample.spacing,
            )
            dump_field(evaluate_grid(forces, simulator.config.blob, grid), field_path)
    except SimulationToolkitError as e:
        raise click.ClickException(str(e))


@cli.command()
@click.argument("jobs_file", type=click.Path(exists=True, dir_okay=False))
@out_option
def batch(jobs_file, out):
    """Run several experiments concurrently.

    JOBS_FILE is a JSON list of {"experiment": name, "config": {...}} entries.
    """
    try:
        jobs = [(job["experiment"], job.get("config")) for job in json.loads(Path(jobs_file).read_text())]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
        raise click.BadParameter(f"cannot read jobs from {jobs_file}: {e}", param_hint="JOBS_FILE")

    orchestrator = ExperimentOrchestrator()
    for i, (name, _) in enumerate(jobs):
        label = orchestrator.job_label(i, name)
        orchestrator.set_status_handler(label, _log_status(label))
    failures = {}
    try:
        results = orchestrator.run(jobs)
    except BatchError as e:
        results, failures = e.results, e.failures
    except SimulationToolkitError as e:
        raise click.ClickException(str(e))

    try:
        for i, result in enumerate(results):
            if result is not None:
                write_result(result, Path(out or get_output_dir()) / f"{i:02d}_{result.name}")
    except SimulationToolkitError as e:
        raise click.ClickException(str(e))
    for label, error in failures.items():
        click.echo(f"Job {label} failed: {error}", err=True)
    click.echo(f"Finished {len(results) - len(failures)} of {len(results)} experiments")
    if failures:
        raise click.ClickException(f"{len(failures)} of {len(results)} jobs failed")


if __name__ == "__main__":
    cli()
