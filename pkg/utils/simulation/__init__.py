"""
Time stepping of immersed curves.
"""
from .simulate import (
    FrameDiagnostics,
    InitialShape,
    SimConfig,
    Simulator,
    Trajectory,
    initial_closed,
    initial_open,
    load_sim_config,
    resolve_delta,
    run,
    step,
)
from .waves import WaveReport, bending_profiles, trajectory_wave_report, wave_report

__all__ = [
    'FrameDiagnostics', 'InitialShape', 'SimConfig', 'Simulator', 'Trajectory',
    'initial_closed', 'initial_open', 'load_sim_config', 'resolve_delta', 'run', 'step',
    'WaveReport', 'bending_profiles', 'trajectory_wave_report', 'wave_report',
]
