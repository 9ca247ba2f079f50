"""
Configuration loader for Affine Lab.
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("csv", "json", "markdown")


@dataclass
class GridConfig:
    """Sample sizes and refinement levels."""

    samples: int = 100
    mass_level: int = 0
    mass_levels: int = 3
    refine_levels: int = 4
    normal_nodes: List[int] = field(default_factory=lambda: [33, 65, 129])

    def __post_init__(self):
        """Validate grid settings."""
        if self.samples < 1:
            raise ValueError(f"Sample count must be positive, got {self.samples}")
        if self.mass_level < 0:
            raise ValueError(f"Mass level must be nonnegative, got {self.mass_level}")
        if self.mass_levels < 1 or self.refine_levels < 1:
            raise ValueError("Refinement level counts must be positive")


@dataclass
class ToleranceConfig:
    """Numeric gates."""

    residual: float = 1e-7
    stability: float = 0.02

    def __post_init__(self):
        """Validate tolerances."""
        if not self.residual > 0 or not self.stability > 0:
            raise ValueError("Tolerances must be positive")


@dataclass
class ScanConfig:
    """Theta grid of a theorem scan."""

    start: Optional[float] = None
    stop: Optional[float] = None
    step: float = 0.01

    def __post_init__(self):
        """Validate scan grid."""
        if not self.step > 0:
            raise ValueError(f"Scan step must be positive, got {self.step}")
        if self.start is not None and self.stop is not None and self.stop < self.start:
            raise ValueError(f"Scan stop {self.stop} lies below start {self.start}")


@dataclass
class OutputConfig:
    """Where and how reports are written."""

    path: str = "./results"
    formats: List[str] = field(default_factory=lambda: ["csv", "json"])

    def __post_init__(self):
        """Validate output settings."""
        unknown = [f for f in self.formats if f not in OUTPUT_FORMATS]
        if unknown:
            raise ValueError(f"Unknown output formats: {unknown}. Must be among {OUTPUT_FORMATS}")


@dataclass
class RunConfig:
    """Main configuration object."""

    theorem: Optional[str] = None
    N: int = 2
    theta: Optional[float] = None
    variant: Optional[str] = None
    family: Optional[Dict[str, Any]] = None
    seed: int = 0
    workers: int = 1
    grid: GridConfig = field(default_factory=GridConfig)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    scan: ScanConfig = field(default_factory=ScanConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        """Validate configuration."""
        if self.N < 1:
            raise ValueError(f"Dimension must be positive, got {self.N}")
        if self.workers < 1:
            raise ValueError(f"Worker count must be positive, got {self.workers}")


def load_config(config_path: str) -> RunConfig:
    """
    Load configuration from a YAML (or JSON) file.

    Args:
        config_path: Path to the configuration file

    Returns:
        RunConfig object

    Raises:
        FileNotFoundError: If config file doesn't exist
        ValueError: If config is invalid
    """
    path = Path(config_path)
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    logger.info(f"Loading configuration from {config_path}")

    with open(path, "r") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ValueError(f"Configuration file is not valid YAML: {e}") from e

    if not data:
        raise ValueError("Configuration file is empty")
    if not isinstance(data, dict):
        raise ValueError("Configuration file must hold a mapping")

    grid_data = data.get("grid", {})
    grid = GridConfig(
        samples=grid_data.get("samples", 100),
        mass_level=grid_data.get("mass_level", 0),
        mass_levels=grid_data.get("mass_levels", 3),
        refine_levels=grid_data.get("refine_levels", 4),
        normal_nodes=list(grid_data.get("normal_nodes", [33, 65, 129])),
    )

    tol_data = data.get("tolerances", {})
    tolerances = ToleranceConfig(
        residual=float(tol_data.get("residual", 1e-7)),
        stability=float(tol_data.get("stability", 0.02)),
    )

    scan_data = data.get("scan", {})
    scan = ScanConfig(
        start=scan_data.get("start"),
        stop=scan_data.get("stop"),
        step=float(scan_data.get("step", 0.01)),
    )

    output_data = data.get("output", {})
    output = OutputConfig(
        path=output_data.get("path", "./results"),
        formats=list(output_data.get("formats", ["csv", "json"])),
    )

    theorem = data.get("theorem")
    config = RunConfig(
        theorem=None if theorem is None else str(theorem),
        N=int(data.get("N", 2)),
        theta=data.get("theta"),
        variant=data.get("variant"),
        family=data.get("family"),
        seed=int(data.get("seed", 0)),
        workers=int(data.get("workers", 1)),
        grid=grid,
        tolerances=tolerances,
        scan=scan,
        output=output,
    )

    logger.info(f"Configuration loaded successfully: theorem={config.theorem}, N={config.N}")

    return config


def apply_overrides(config: RunConfig, **overrides: Any) -> RunConfig:
    """
    Return a copy of config with command-line values laid over it.

    None values leave the file setting in place. Recognized keys are the
    RunConfig scalars plus ``samples`` (grid), ``tol`` (residual tolerance)
    and ``out`` (output path).
    """
    top = {
        k: v
        for k, v in overrides.items()
        if v is not None and k in ("theorem", "N", "theta", "variant", "seed", "workers")
    }
    grid = config.grid
    if overrides.get("samples") is not None:
        grid = replace(grid, samples=int(overrides["samples"]))
    tolerances = config.tolerances
    if overrides.get("tol") is not None:
        tolerances = replace(tolerances, residual=float(overrides["tol"]))
    output = config.output
    if overrides.get("out") is not None:
        output = replace(output, path=str(overrides["out"]))
    return replace(config, grid=grid, tolerances=tolerances, output=output, **top)
