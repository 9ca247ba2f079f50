"""
Unit tests for configuration loading.
"""

import pytest

from affine_lab.config import RunConfig, ScanConfig, apply_overrides, load_config


class TestLoadConfig:
    """Test cases for load_config."""

    def test_full_file(self, config_file):
        """Every section is read into its dataclass."""
        path = config_file(
            """
theorem: "10.2"
N: 3
theta: 0.6
seed: 7
workers: 2
grid:
  samples: 50
  mass_levels: 2
  normal_nodes: [17, 33]
tolerances:
  residual: 1.0e-9
  stability: 0.05
scan:
  start: 0.5
  stop: 0.6
  step: 0.02
output:
  path: ./out
  formats: [json, markdown]
"""
        )
        config = load_config(path)
        assert config.theorem == "10.2"
        assert config.N == 3
        assert config.theta == 0.6
        assert config.seed == 7
        assert config.workers == 2
        assert config.grid.samples == 50
        assert config.grid.mass_levels == 2
        assert config.grid.normal_nodes == [17, 33]
        assert config.tolerances.residual == 1e-9
        assert config.tolerances.stability == 0.05
        assert config.scan.step == 0.02
        assert config.output.path == "./out"
        assert config.output.formats == ["json", "markdown"]

    def test_defaults(self, config_file):
        """Missing sections fall back to defaults."""
        config = load_config(config_file("N: 2\n"))
        assert config.theorem is None
        assert config.grid.samples == 100
        assert config.tolerances.residual == 1e-7
        assert config.output.formats == ["csv", "json"]
        assert config.scan.start is None

    def test_numeric_theorem_is_string(self, config_file):
        """An unquoted theorem number is kept as its label."""
        config = load_config(config_file("theorem: 8.1\n"))
        assert config.theorem == "8.1"

    def test_missing_file(self, tmp_path):
        """A missing file is reported."""
        with pytest.raises(FileNotFoundError):
            load_config(str(tmp_path / "absent.yml"))

    def test_empty_file(self, config_file):
        """An empty file is invalid."""
        with pytest.raises(ValueError, match="empty"):
            load_config(config_file(""))

    def test_not_a_mapping(self, config_file):
        """The top level must be a mapping."""
        with pytest.raises(ValueError, match="mapping"):
            load_config(config_file("- 1\n- 2\n"))

    def test_bad_yaml(self, config_file):
        """Syntax errors surface as ValueError."""
        with pytest.raises(ValueError, match="not valid YAML"):
            load_config(config_file("grid: [1, 2\n"))

    def test_unknown_format(self, config_file):
        """Only csv, json and markdown are written."""
        with pytest.raises(ValueError, match="Unknown output formats"):
            load_config(config_file("output:\n  formats: [xml]\n"))

    def test_invalid_values(self, config_file):
        """Dataclass validation runs on loaded values."""
        with pytest.raises(ValueError, match="Worker count"):
            load_config(config_file("workers: 0\n"))
        with pytest.raises(ValueError, match="Sample count"):
            load_config(config_file("grid:\n  samples: 0\n"))


class TestOverrides:
    """Test cases for apply_overrides."""

    def test_none_keeps_file_value(self):
        """None overrides leave settings alone."""
        config = RunConfig(N=3, seed=5)
        merged = apply_overrides(config, N=None, seed=None, tol=None)
        assert merged.N == 3
        assert merged.seed == 5

    def test_nested_overrides(self):
        """samples, tol and out land in their sections."""
        merged = apply_overrides(RunConfig(), samples=10, tol=1e-3, out="/tmp/x", theta=0.3)
        assert merged.grid.samples == 10
        assert merged.tolerances.residual == 1e-3
        assert merged.output.path == "/tmp/x"
        assert merged.theta == 0.3

    def test_original_untouched(self):
        """Overrides return a copy."""
        config = RunConfig()
        apply_overrides(config, N=4, samples=3)
        assert config.N == 2
        assert config.grid.samples == 100

    def test_validation_after_override(self):
        """Overridden values are validated."""
        with pytest.raises(ValueError):
            apply_overrides(RunConfig(), workers=0)

    def test_scan_bounds(self):
        """A scan cannot stop below its start."""
        with pytest.raises(ValueError, match="below start"):
            ScanConfig(start=0.5, stop=0.4)
