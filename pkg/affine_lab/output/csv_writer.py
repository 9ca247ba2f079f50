"""
CSV writer for tabular reports.
"""

import csv
import io
import logging
from typing import Any, List

from affine_lab.models import RunReport
from .base import ReportWriter

logger = logging.getLogger(__name__)


def _cell(value: Any) -> Any:
    # repr keeps every float digit so reruns compare byte for byte
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float):
        return repr(float(value))
    return value


class CSVWriter(ReportWriter):
    """Write report rows as CSV, columns in first-seen order."""

    extension = "csv"

    def render(self, report: RunReport) -> str:
        logger.info(f"Rendering {len(report.rows)} rows as CSV")
        columns: List[str] = []
        for row in report.rows:
            for key in row:
                if key not in columns:
                    columns.append(key)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in report.rows:
            writer.writerow({k: _cell(v) for k, v in row.items()})
        return buffer.getvalue()

