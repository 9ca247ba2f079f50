"""
Pytest fixtures and configuration for tests.
"""

import numpy as np
import pytest

from affine_lab.surfaces import Ball, PowerRadial, Quadratic


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(0)


@pytest.fixture
def unit_disk():
    """Unit ball in the plane."""
    return Ball(np.zeros(2), 1.0)


@pytest.fixture
def paraboloid():
    """u = |x|^2 - 1 in the plane, vanishing on the unit circle."""
    return Quadratic(2 * np.eye(2), c=-1.0)


@pytest.fixture
def normalized_paraboloid():
    """u = |x|^2 in the plane: u = 1 on the unit circle, u(0) = 0, Du(0) = 0."""
    return Quadratic(2 * np.eye(2))


@pytest.fixture
def cubic_radial():
    """u = |x|^3 - 1 in the plane."""
    return PowerRadial(3.0, 2)


@pytest.fixture
def config_file(tmp_path):
    """Write a run configuration and return its path."""

    def write(text: str):
        path = tmp_path / "config.yml"
        path.write_text(text)
        return str(path)

    return write
