"""Shared fixtures."""

import numpy as np
import pytest

from app.numerics.mesh import Mesh, mesh_from_widths


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_mesh(rng: np.random.Generator, n: int, a: float = -1.0, b: float = 1.0) -> Mesh:
    """Mesh with widths drawn from (0.1, 1], mapped onto [a, b]."""
    return mesh_from_widths(rng.uniform(0.1, 1.0, n), a, b)
