"""
Report Service for the RBF-Stokeslets application.

Renders a Markdown summary of an experiment result from a Jinja2 template.
"""
import json
import os
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List

from jinja2 import Environment, FileSystemLoader, TemplateError

from ..core.exceptions import ReportError

TEMPLATES_DIR = Path(__file__).resolve().parents[2] / "templates"


class ReportService:
    """Service for rendering experiment reports"""

    def __init__(self, templates_dir: str | os.PathLike = TEMPLATES_DIR, max_rows: int = 20):
        """
        Initialize the report service

        Args:
            templates_dir: Path to the templates directory
            max_rows: Number of table rows shown in the rendered report
        """
        self.templates_dir = Path(templates_dir)
        self.max_rows = max_rows
        self.env = Environment(
            loader=FileSystemLoader(str(self.templates_dir)),
            trim_blocks=True,
            lstrip_blocks=True,
        )
        self.env.filters["number"] = _format_number

    def get_available_templates(self) -> List[str]:
        if not self.templates_dir.exists():
            return []
        return sorted(p.name for p in self.templates_dir.glob("*.j2"))

    def render_report(self, result, template_name: str = "report.md.j2") -> str:
        """
        Render a result with the given template

        Args:
            result: ExperimentResult to render
            template_name: Template file name

        Returns:
            Rendered Markdown
        """
        head = result.table.head(self.max_rows)
        context: Dict[str, Any] = {
            "name": result.name,
            "generated": datetime.now().isoformat(timespec="seconds"),
            "config_json": json.dumps(result.config, indent=2, default=str),
            "summary": result.summary,
            "columns": list(head.columns),
            "rows": head.to_dict(orient="records"),
            "total_rows": len(result.table),
            "extra_tables": {name: len(frame) for name, frame in result.extra_tables.items()},
        }
        try:
            return self.env.get_template(template_name).render(**context)
        except TemplateError as e:
            raise ReportError(f"Error rendering template {template_name}: {str(e)}") from e


def _format_number(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
