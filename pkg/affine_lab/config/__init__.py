"""
Configuration module for Affine Lab.
"""

from .loader import (
    GridConfig,
    OutputConfig,
    RunConfig,
    ScanConfig,
    ToleranceConfig,
    apply_overrides,
    load_config,
)

__all__ = [
    "GridConfig",
    "OutputConfig",
    "RunConfig",
    "ScanConfig",
    "ToleranceConfig",
    "apply_overrides",
    "load_config",
]
