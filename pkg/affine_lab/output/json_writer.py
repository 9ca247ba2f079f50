"""
JSON writer for structured bundles.
"""

import json
import logging
from typing import Any

import numpy as np

from affine_lab.models import RunReport
from .base import ReportWriter

logger = logging.getLogger(__name__)


def _default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


class JSONWriter(ReportWriter):
    """Write the bundle, rows and verdict of a report as canonical JSON."""

    extension = "json"

    def render(self, report: RunReport) -> str:
        logger.info(f"Rendering {report.command} bundle as JSON")
        doc = {
            "command": report.command,
            "passed": report.passed,
            "bundle": report.bundle,
            "rows": report.rows,
        }
        return json.dumps(doc, sort_keys=True, indent=2, default=_default) + "\n"
