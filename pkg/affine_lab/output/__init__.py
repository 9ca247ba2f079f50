"""
Output module for writing run reports.
"""

from .base import ReportWriter
from .csv_writer import CSVWriter
from .json_writer import JSONWriter
from .markdown import MarkdownWriter

WRITERS = {"csv": CSVWriter, "json": JSONWriter, "markdown": MarkdownWriter}

__all__ = ["WRITERS", "CSVWriter", "JSONWriter", "MarkdownWriter", "ReportWriter"]
