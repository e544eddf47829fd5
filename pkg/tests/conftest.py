import numpy as np
import pytest

from minlab import surfaces as sf, mesh as mm


@pytest.fixture(scope="session")
def plane_disk():
    """Unit parameter disk on the flat plane, h = 0.02."""
    return mm.triangulate(sf.ImmersionSpec("plane"), 1.0, 0.02)


@pytest.fixture(scope="session")
def plane_patch():
    """Plane patch covering B_16, h = 0.05."""
    return mm.build_patch(sf.ImmersionSpec("plane"), 16.0, 0.05)


@pytest.fixture(scope="session")
def enneper_small():
    """Enneper k=1 patch covering B_4.4, h = 0.05."""
    return mm.build_patch(sf.ImmersionSpec("enneper", 1), 4.4, 0.05)


def trig_boundary_values(mesh, component, seed):
    """Smooth deterministic pseudo-random boundary data (modes 1..6)."""
    from minlab.rng import SplitMix64

    gen = SplitMix64(seed)
    coeffs = [(gen.uniform_signed(), gen.uniform_signed()) for _ in range(6)]
    theta = np.arctan2(
        mesh.params[component.boundary_vertices, 1],
        mesh.params[component.boundary_vertices, 0],
    )
    vals = np.zeros(len(theta))
    for m, (a, b) in enumerate(coeffs, start=1):
        vals += a * np.cos(m * theta) + b * np.sin(m * theta)
    return vals
