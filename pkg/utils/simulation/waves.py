"""
Travelling-wave diagnostics for open-filament runs.

The bending force only sees the fourth lambda-derivative of y. The cubic part
of y has almost none, so it is barely restored and drifts with the mean flow.
These diagnostics therefore measure the wave on y'''', the quantity the force
acts on, and report the raw peak-to-peak of y separately.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from ..forces.models import TargetShape
from ..geometry.curve import ParametricCurve, Topology, coordinate_derivative
from ..geometry.interpolation import OperatorBank
from ..geometry.nodes import NodeSet
from .simulate import Trajectory

logger = logging.getLogger(__name__)

# Frame times closer than this are the same output frame.
_TIME_TOLERANCE = 1e-8


@dataclass
class WaveReport:
    period: float
    wave_amplitude: float
    amplitude_ratio: float
    period_mismatch: float
    half_period_mismatch: float
    peak_to_peak: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def bending_profiles(trajectory: Trajectory, operators: OperatorBank, sample: NodeSet) -> np.ndarray:
    """y'''' at the sample nodes for every recorded frame, shape (frames, N_s)."""
    if trajectory.topology is not Topology.OPEN_GRAPH:
        raise ValueError("Bending profiles are defined for open graphs only")
    profiles = np.empty((trajectory.frames, sample.count))
    for i, (time, sites) in enumerate(zip(trajectory.times, trajectory.states)):
        curve = ParametricCurve(
            topology=trajectory.topology, data_nodes=trajectory.data_nodes, data_sites=sites, time=time
        )
        profiles[i] = coordinate_derivative(curve, operators, sample, 4)[:, 1]
    return profiles


def _frame_at(times: np.ndarray, time: float) -> Optional[int]:
    index = int(np.argmin(np.abs(times - time)))
    return index if abs(times[index] - time) <= _TIME_TOLERANCE else None


def _relative_difference(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(a))


def wave_report(times: List[float] | np.ndarray, profiles: np.ndarray, final_y: np.ndarray,
                target: TargetShape) -> Optional[WaveReport]:
    """
    Amplitude and periodicity of the bending wave over the last target period.

    The amplitude is sqrt(2 <z^2>) / k^4 with z = y'''' averaged over the
    frames of the last period and over the sample nodes; for the target wave
    itself this equals b whenever the frames split the period evenly.

    Args:
        times: Frame times, uniformly spaced
        profiles: y'''' per frame, shape (frames, N_s)
        final_y: y at the data sites in the last frame
        target: Target wave (b, k, omega)

    Returns:
        The report, or None when the run is shorter than one period or the
        frames do not land on whole and half periods
    """
    times = np.asarray(times, dtype=float)
    if target.omega == 0.0 or target.k == 0.0 or times.size < 2:
        return None
    period = 2.0 * np.pi / abs(target.omega)
    t_end = times[-1]
    if t_end - times[0] < period - _TIME_TOLERANCE:
        logger.info("Run shorter than one wave period (%g); no wave diagnostics", period)
        return None
    one_back = _frame_at(times, t_end - period)
    half_back = _frame_at(times, t_end - 0.5 * period)
    if one_back is None or half_back is None:
        logger.info("Output frames do not resolve the wave period %g", period)
        return None

    last_period = profiles[one_back + 1:]
    amplitude = float(np.sqrt(2.0 * np.mean(last_period ** 2)) / target.k ** 4)
    return WaveReport(
        period=period,
        wave_amplitude=amplitude,
        amplitude_ratio=amplitude / target.b if target.b else float("nan"),
        period_mismatch=_relative_difference(profiles[-1], profiles[one_back]),
        half_period_mismatch=_relative_difference(profiles[-1], profiles[half_back]),
        peak_to_peak=float(np.ptp(final_y)),
    )


def trajectory_wave_report(trajectory: Trajectory, operators: OperatorBank, sample: NodeSet,
                           target: TargetShape) -> Optional[WaveReport]:
    """wave_report for a recorded open-graph trajectory."""
    if trajectory.topology is not Topology.OPEN_GRAPH or trajectory.frames < 2:
        return None
    profiles = bending_profiles(trajectory, operators, sample)
    return wave_report(trajectory.times, profiles, trajectory.states[-1][:, 1], target)
