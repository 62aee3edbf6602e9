from pathlib import Path

import pytest

from iceline.legendre import quadrature

REPO_ROOT = Path(__file__).resolve().parent.parent
CONFIG_DIR = REPO_ROOT / "configs"


@pytest.fixture(scope="session")
def config_dir() -> Path:
    return CONFIG_DIR


def piecewise_quadrature(f, breakpoints, tol=1e-12):
    """Integrate f over [0, 1] splitting at the given interior breakpoints."""
    edges = sorted({0.0, 1.0, *(float(b) for b in breakpoints
                                if 0.0 < float(b) < 1.0)})
    return sum(
        quadrature(f, a, b, tol=tol) for a, b in zip(edges[:-1], edges[1:])
    )
