"""
Markdown run summary.
"""

import logging
from typing import Any, Dict, List

from affine_lab.models import RunReport
from .base import ReportWriter

logger = logging.getLogger(__name__)

MAX_ROWS = 50


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class MarkdownWriter(ReportWriter):
    """Render a short human-readable summary of a run."""

    extension = "md"

    def render(self, report: RunReport) -> str:
        """
        Render a report as Markdown.

        Args:
            report: Report to render

        Returns:
            Markdown formatted string
        """
        logger.info(f"Rendering {report.command} summary as Markdown")
        verdict = "✓ passed" if report.passed else "✗ failed"
        lines = [f"# affine-lab {report.command}", "", f"**Result:** {verdict}", ""]

        scalars = {
            k: v for k, v in sorted(report.bundle.items()) if not isinstance(v, (dict, list))
        }
        if scalars:
            lines.append("## Parameters")
            lines.append("")
            for key, value in scalars.items():
                lines.append(f"- **{key}:** {_fmt(value)}")
            lines.append("")

        if report.rows:
            lines.append(f"## Results ({len(report.rows)} rows)")
            lines.append("")
            lines.extend(self._table(report.rows[:MAX_ROWS]))
            if len(report.rows) > MAX_ROWS:
                lines.append("")
                lines.append(f"*{len(report.rows) - MAX_ROWS} more rows in the CSV report*")
        return "\n".join(lines) + "\n"

    def _table(self, rows: List[Dict[str, Any]]) -> List[str]:
        columns: List[str] = []
        for row in rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
        lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
        for row in rows:
            lines.append("| " + " | ".join(_fmt(row.get(c, "")) for c in columns) + " |")
        return lines
