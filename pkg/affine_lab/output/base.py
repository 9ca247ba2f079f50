"""
Base report writer interface.
"""

import logging
from abc import ABC, abstractmethod
from pathlib import Path

from affine_lab.models import RunReport

logger = logging.getLogger(__name__)


class ReportWriter(ABC):
    """Abstract base class for report writers."""

    extension: str = "txt"

    @abstractmethod
    def render(self, report: RunReport) -> str:
        """
        Render a run report into the writer's format.

        Args:
            report: Report to render

        Returns:
            Rendered output as string
        """
        pass

    def write(self, report: RunReport, directory: str) -> Path:
        """
        Render a report into ``directory/<command>.<extension>``.

        Returns:
            Path of the written file
        """
        out_dir = Path(directory)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"{report.stem}.{self.extension}"
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(self.render(report))
        logger.info(f"Report saved to: {path}")
        return path
