"""
Output services: CSV/JSON writers, debug dumps and Markdown report rendering.
"""
from .export import (
    dump_field,
    dump_forces,
    dump_geometry,
    dump_operator,
    trajectory_diagnostics,
    trajectory_frames,
    write_csv,
    write_json,
    write_result,
    write_trajectory,
)
from .report_service import ReportService

__all__ = [
    'dump_field', 'dump_forces', 'dump_geometry', 'dump_operator',
    'trajectory_diagnostics', 'trajectory_frames', 'write_csv', 'write_json',
    'write_result', 'write_trajectory', 'ReportService',
]
