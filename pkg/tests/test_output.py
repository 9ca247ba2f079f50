"""
Unit tests for report writers.
"""

import csv
import json

import numpy as np
import pytest

from affine_lab.models import RunReport
from affine_lab.output import WRITERS, CSVWriter, JSONWriter, MarkdownWriter


@pytest.fixture
def report():
    """A small scan report."""
    return RunReport(
        command="scan",
        rows=[
            {"theorem": "8.1", "N": 3, "theta": 0.1, "max_residual": 1e-12, "passed": True},
            {"theorem": "8.1", "N": 3, "theta": 0.2, "max_residual": 3e-13, "passed": True},
        ],
        bundle={"theorem": "8.1", "N": 3, "step": 0.1, "x0": np.array([0.5, 0.25])},
        passed=True,
    )


class TestCSVWriter:
    """Test cases for CSVWriter."""

    def test_round_digits(self, report):
        """Floats keep every digit."""
        text = CSVWriter().render(report)
        rows = list(csv.DictReader(text.splitlines()))
        assert len(rows) == 2
        assert float(rows[1]["theta"]) == 0.2
        assert float(rows[0]["max_residual"]) == 1e-12

    def test_column_order(self):
        """Columns appear in first-seen order, later keys appended."""
        mixed = RunReport(command="verify", rows=[{"a": 1, "b": 2}, {"b": 3, "c": 4}])
        header = CSVWriter().render(mixed).splitlines()[0]
        assert header == "a,b,c"

    def test_numpy_scalars(self):
        """numpy scalars are written like Python floats."""
        row = RunReport(command="verify", rows=[{"x": np.float64(0.1)}])
        assert CSVWriter().render(row).splitlines()[1] == "0.1"


class TestJSONWriter:
    """Test cases for JSONWriter."""

    def test_document(self, report):
        """The bundle, rows and verdict are all present."""
        doc = json.loads(JSONWriter().render(report))
        assert doc["command"] == "scan"
        assert doc["passed"] is True
        assert doc["bundle"]["x0"] == [0.5, 0.25]
        assert len(doc["rows"]) == 2

    def test_deterministic(self, report):
        """Rendering twice gives identical bytes."""
        assert JSONWriter().render(report) == JSONWriter().render(report)

    def test_sorted_keys(self, report):
        """Keys are sorted regardless of insertion order."""
        text = JSONWriter().render(report)
        assert text.index('"bundle"') < text.index('"command"') < text.index('"rows"')


class TestMarkdownWriter:
    """Test cases for MarkdownWriter."""

    def test_summary(self, report):
        """Verdict, parameters and table are rendered."""
        text = MarkdownWriter().render(report)
        assert text.startswith("# affine-lab scan")
        assert "✓ passed" in text
        assert "- **step:** 0.1" in text
        assert "## Results (2 rows)" in text
        assert "| theorem | N | theta | max_residual | passed |" in text

    def test_failed_verdict(self):
        """Failed runs are flagged."""
        text = MarkdownWriter().render(RunReport(command="verify", passed=False))
        assert "✗ failed" in text

    def test_row_cap(self):
        """Long tables are truncated."""
        long = RunReport(command="scan", rows=[{"k": i} for i in range(60)])
        text = MarkdownWriter().render(long)
        assert "*10 more rows in the CSV report*" in text


class TestWrite:
    """Test cases for writing files."""

    def test_files(self, report, tmp_path):
        """Each writer writes <command>.<extension> into the directory."""
        paths = [WRITERS[name]().write(report, str(tmp_path / "out")) for name in WRITERS]
        assert sorted(p.name for p in paths) == ["scan.csv", "scan.json", "scan.md"]
        assert all(p.exists() for p in paths)

    def test_stem(self):
        """Multi-word commands become hyphenated file names."""
        assert RunReport(command="solve alpha").stem == "solve-alpha"

    def test_empty_command(self):
        """Reports are named."""
        with pytest.raises(ValueError):
            RunReport(command="")
